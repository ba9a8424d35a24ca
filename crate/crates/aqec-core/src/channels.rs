//! Channel zoo (depolarizing, amplitude damping, iid tensor powers,
//! user-supplied Kraus sets), Choi-matrix construction under a fixed
//! normalization convention, and direct channel-fidelity evaluation for
//! given encoder/decoder pairs.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qcore::{
    self, kron, max_entangled_labeled, partial_trace, permute_systems, CMatrix, Op, SystemLayout,
};

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("parameter {value} outside [0, 1]")]
    ParamOutOfRange { value: f64 },
    #[error("dimension must be at least 2 (got {dim})")]
    DimensionTooSmall { dim: usize },
    #[error("Kraus completeness violated: ‖ΣK†K − I‖_max = {deviation:.3e}")]
    NotCptp { deviation: f64 },
    #[error("Kraus operator shape mismatch")]
    KrausShape,
    #[error("encoder/decoder layouts incompatible with the noise channel")]
    IncompatibleLayouts,
    #[error("invalid code pair: {reason}")]
    InvalidCodePair { reason: String },
    #[error(transparent)]
    Qcore(#[from] qcore::QcoreError),
}

/// Completeness tolerance for accepting a Kraus set as CPTP.
pub const CPTP_TOL: f64 = 1e-10;

/// A channel given by its Kraus operators (each `out_dim × in_dim`).
#[derive(Debug, Clone)]
pub struct QuantumChannel {
    kraus: Vec<CMatrix>,
    in_layout: SystemLayout,
    out_layout: SystemLayout,
}

impl QuantumChannel {
    pub fn new(
        kraus: Vec<CMatrix>,
        in_layout: SystemLayout,
        out_layout: SystemLayout,
    ) -> Result<Self, ChannelError> {
        let d_in = in_layout.total_dim();
        let d_out = out_layout.total_dim();
        if kraus.is_empty() {
            return Err(ChannelError::KrausShape);
        }
        for k in &kraus {
            if k.nrows() != d_out || k.ncols() != d_in {
                return Err(ChannelError::KrausShape);
            }
        }
        let ch = QuantumChannel {
            kraus,
            in_layout,
            out_layout,
        };
        let dev = ch.completeness_deviation();
        if dev > CPTP_TOL {
            return Err(ChannelError::NotCptp { deviation: dev });
        }
        Ok(ch)
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn in_layout(&self) -> &SystemLayout {
        &self.in_layout
    }

    pub fn out_layout(&self) -> &SystemLayout {
        &self.out_layout
    }

    pub fn in_dim(&self) -> usize {
        self.in_layout.total_dim()
    }

    pub fn out_dim(&self) -> usize {
        self.out_layout.total_dim()
    }

    /// `‖Σ K†K − I‖_max`.
    pub fn completeness_deviation(&self) -> f64 {
        let d_in = self.in_dim();
        let mut acc = CMatrix::zeros(d_in, d_in);
        for k in &self.kraus {
            acc += k.adjoint() * k;
        }
        let mut dev = 0.0f64;
        for i in 0..d_in {
            for j in 0..d_in {
                let expect = if i == j {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                dev = dev.max((acc[(i, j)] - expect).norm());
            }
        }
        dev
    }

    /// Apply the channel to an operator on the input layout.
    pub fn apply(&self, rho: &Op) -> Result<Op, ChannelError> {
        if rho.dim() != self.in_dim() {
            return Err(ChannelError::IncompatibleLayouts);
        }
        let d_out = self.out_dim();
        let mut out = CMatrix::zeros(d_out, d_out);
        for k in &self.kraus {
            out += k * rho.entries() * k.adjoint();
        }
        Ok(Op::new(self.out_layout.clone(), out)?)
    }

    /// Identity channel on one `d`-dimensional system.
    pub fn identity(d: usize, label: &str) -> Self {
        QuantumChannel {
            kraus: vec![CMatrix::identity(d, d)],
            in_layout: SystemLayout::single(label, d),
            out_layout: SystemLayout::single(label, d),
        }
    }
}

/// Qubit depolarizing channel with Pauli parameter `p`:
/// Kraus `{√(1−p)·I, √(p/3)·X, √(p/3)·Y, √(p/3)·Z}`.
///
/// For `d > 2`, the `(1−q)ρ + q·I/d` parameterization is used with
/// `q = p·d²/(d²−1)·…` chosen so the qubit case matches the Pauli form,
/// i.e. `q = 4p/3` at `d = 2`.
pub fn depolarizing(p: f64, d: usize) -> Result<QuantumChannel, ChannelError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(ChannelError::ParamOutOfRange { value: p });
    }
    if d < 2 {
        return Err(ChannelError::DimensionTooSmall { dim: d });
    }
    if d == 2 {
        let s0 = Complex64::new((1.0 - p).sqrt(), 0.0);
        let s1 = Complex64::new((p / 3.0).sqrt(), 0.0);
        let kraus = vec![
            CMatrix::identity(2, 2) * s0,
            qcore::pauli::matrix_x() * s1,
            qcore::pauli::matrix_y() * s1,
            qcore::pauli::matrix_z() * s1,
        ];
        QuantumChannel::new(
            kraus,
            SystemLayout::single("P", 2),
            SystemLayout::single("P", 2),
        )
    } else {
        // (1−q)ρ + q I/d with q scaled so d=2 reproduces the Pauli picture.
        let q = p * 4.0 / 3.0;
        if !(0.0..=1.0 + 1e-12).contains(&q) {
            return Err(ChannelError::ParamOutOfRange { value: p });
        }
        // Kraus set: √(1−q)·I plus the d² Heisenberg–Weyl operators scaled by √(q/d²).
        let mut kraus = vec![CMatrix::identity(d, d) * Complex64::new((1.0 - q).sqrt(), 0.0)];
        let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / d as f64);
        let scale = Complex64::new((q / (d * d) as f64).sqrt(), 0.0);
        for a in 0..d {
            for b in 0..d {
                if a == 0 && b == 0 {
                    // Identity displacement folds into the first Kraus term:
                    // (1−q)ρ + (q/d²)ρ + … ; absorb by adjusting the weight.
                    continue;
                }
                let mut m = CMatrix::zeros(d, d);
                for k in 0..d {
                    m[((k + a) % d, k)] = w.powu(b as u32 * k as u32) * scale;
                }
                kraus.push(m);
            }
        }
        // Leading coefficient: (1−q) + q/d² on the identity component.
        let lead = ((1.0 - q) + q / (d * d) as f64).sqrt();
        kraus[0] = CMatrix::identity(d, d) * Complex64::new(lead, 0.0);
        QuantumChannel::new(
            kraus,
            SystemLayout::single("P", d),
            SystemLayout::single("P", d),
        )
    }
}

/// Single-qubit amplitude damping with damping parameter `γ`.
pub fn amplitude_damping(gamma: f64) -> Result<QuantumChannel, ChannelError> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(ChannelError::ParamOutOfRange { value: gamma });
    }
    let mut k0 = CMatrix::identity(2, 2);
    k0[(1, 1)] = Complex64::new((1.0 - gamma).sqrt(), 0.0);
    let mut k1 = CMatrix::zeros(2, 2);
    k1[(0, 1)] = Complex64::new(gamma.sqrt(), 0.0);
    QuantumChannel::new(
        vec![k0, k1],
        SystemLayout::single("P", 2),
        SystemLayout::single("P", 2),
    )
}

/// `copies`-fold iid tensor power. Kraus set is all tensor products of the
/// single-copy Kraus operators; layout labels are suffixed per copy.
pub fn iid_power(m: &QuantumChannel, copies: usize) -> Result<QuantumChannel, ChannelError> {
    assert!(copies >= 1, "copies must be at least 1");
    if copies == 1 {
        return Ok(m.clone());
    }
    let mut kraus: Vec<CMatrix> = m.kraus.clone();
    for _ in 1..copies {
        let mut next = Vec::with_capacity(kraus.len() * m.kraus.len());
        for a in &kraus {
            for b in &m.kraus {
                next.push(a.kronecker(b));
            }
        }
        kraus = next;
    }
    let suffixed = |layout: &SystemLayout| -> SystemLayout {
        let mut systems = Vec::new();
        for copy in 0..copies {
            for (l, d) in layout.systems() {
                systems.push((format!("{l}_{copy}"), *d));
            }
        }
        SystemLayout::new(systems).expect("suffixed labels are unique")
    };
    QuantumChannel::new(kraus, suffixed(&m.in_layout), suffixed(&m.out_layout))
}

/// Normalized Choi matrix `C = (id ⊗ N)(Φ)` with the reference system on
/// the left. Layout labels: input labels suffixed `_ref`, then output labels.
pub fn choi(n: &QuantumChannel) -> Result<Op, ChannelError> {
    let dev = n.completeness_deviation();
    if dev > CPTP_TOL {
        return Err(ChannelError::NotCptp { deviation: dev });
    }
    let d_in = n.in_dim();
    let d_out = n.out_dim();
    let dim = d_in * d_out;
    let mut c = CMatrix::zeros(dim, dim);
    let inv = 1.0 / d_in as f64;
    // C[(a,b),(c,d)] = (1/d_in) Σ_k K[b,a] conj(K[d,c]).
    for k in n.kraus() {
        for a in 0..d_in {
            for b in 0..d_out {
                let kba = k[(b, a)];
                if kba.norm_sqr() == 0.0 {
                    continue;
                }
                for cc in 0..d_in {
                    for dd in 0..d_out {
                        c[(a * d_out + b, cc * d_out + dd)] +=
                            kba * k[(dd, cc)].conj() * inv;
                    }
                }
            }
        }
    }
    let mut systems: Vec<(String, usize)> = n
        .in_layout
        .systems()
        .iter()
        .map(|(l, d)| (format!("{l}_ref"), *d))
        .collect();
    systems.extend(n.out_layout.systems().iter().cloned());
    Ok(Op::new_hermitian(SystemLayout::new(systems)?, c)?)
}

/// An encoder/decoder Choi pair with its channel-fidelity value.
///
/// `encoder_choi` lives on (L̄, P̄) with `tr_{P̄} = 1_{L̄}/d_{L̄}`;
/// `decoder_choi` is the Choi of the adjoint decoder on (L, P) with
/// `tr_L = 1_P/d_P`. Both are PSD with unit trace.
#[derive(Debug, Clone)]
pub struct CodePair {
    pub encoder_choi: Op,
    pub decoder_choi: Op,
    pub fidelity: f64,
}

/// Marginal-constraint tolerance for code pairs.
pub const CODE_MARGINAL_TOL: f64 = 1e-8;

impl CodePair {
    /// Validate PSD, unit trace and the two marginal constraints.
    pub fn validate(&self, d_l: usize, d_p: usize) -> Result<(), ChannelError> {
        for (name, op) in [("encoder", &self.encoder_choi), ("decoder", &self.decoder_choi)] {
            let tr = op.trace();
            if (tr.re - 1.0).abs() > CODE_MARGINAL_TOL || tr.im.abs() > CODE_MARGINAL_TOL {
                return Err(ChannelError::InvalidCodePair {
                    reason: format!("{name} Choi trace {} ≠ 1", tr.re),
                });
            }
            let min = op.eigenvalues_hermitian().first().copied().unwrap_or(0.0);
            if min < -1e-8 {
                return Err(ChannelError::InvalidCodePair {
                    reason: format!("{name} Choi not PSD (min eig {min:.3e})"),
                });
            }
        }
        // tr_{P̄}[C_E] = 1_{L̄}/d_{L̄}: keep the first system of the encoder layout.
        let enc_ref: Vec<&str> = self
            .encoder_choi
            .layout()
            .labels()
            .take(ref_system_count(&self.encoder_choi, d_l))
            .collect();
        let marg_e = partial_trace(&self.encoder_choi, &enc_ref)?;
        let dev_e = marg_e
            .sub(&Op::identity(marg_e.layout().clone()).scale(Complex64::new(1.0 / d_l as f64, 0.0)))?
            .max_abs();
        if dev_e > CODE_MARGINAL_TOL {
            return Err(ChannelError::InvalidCodePair {
                reason: format!("encoder marginal deviates by {dev_e:.3e}"),
            });
        }
        // tr_L[C_{D†}] = 1_P/d_P: drop the first system(s) of the decoder layout.
        let dec_labels: Vec<&str> = self.decoder_choi.layout().labels().collect();
        let dec_out: Vec<&str> = dec_labels[ref_system_count(&self.decoder_choi, d_l)..].to_vec();
        let marg_d = partial_trace(&self.decoder_choi, &dec_out)?;
        let dev_d = marg_d
            .sub(&Op::identity(marg_d.layout().clone()).scale(Complex64::new(1.0 / d_p as f64, 0.0)))?
            .max_abs();
        if dev_d > CODE_MARGINAL_TOL {
            return Err(ChannelError::InvalidCodePair {
                reason: format!("decoder marginal deviates by {dev_d:.3e}"),
            });
        }
        Ok(())
    }
}

/// Number of leading systems making up the logical factor of dimension `d_l`.
fn ref_system_count(op: &Op, d_l: usize) -> usize {
    let mut acc = 1;
    for (k, (_, d)) in op.layout().systems().iter().enumerate() {
        acc *= d;
        if acc == d_l {
            return k + 1;
        }
    }
    1
}

/// Objective operator `d_P² · C_{id_L⊗N}` on layout `(L, P, Lb, Q)` with
/// `P` the noise output block and `Q` the noise input (encoder output)
/// block, arranged so that
/// `F = tr[obj · (C_{D†}ᵀ ⊗ C_E)]` equals `Σ_k |tr K_k|² / d_L²` for the
/// composite channel `D∘N∘E`.
pub fn fidelity_objective(noise: &QuantumChannel, d_l: usize) -> Result<Op, ChannelError> {
    let d_p = noise.out_dim();
    let phi = max_entangled_labeled(d_l, "L", "Lb")?;
    // Noise Choi with output labeled P (left) and reference labeled Q, then
    // transposed: the transpose is what makes the bilinear pairing reproduce
    // the Kraus composite trace (see tests against the direct oracle).
    let c_n = choi(noise)?;
    let c_n_t = c_n.transpose();
    // choi layout: (in_ref..., out...); relabel to (Q, P) then reorder (P, Q).
    let n_sys = c_n_t.layout().num_systems();
    let in_count = noise.in_layout.num_systems();
    let mut labels: Vec<String> = Vec::with_capacity(n_sys);
    for k in 0..in_count {
        labels.push(format!("Q{k}"));
    }
    for k in 0..(n_sys - in_count) {
        labels.push(format!("P{k}"));
    }
    let label_refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
    let c_n_t = Op::new(
        SystemLayout::new(
            label_refs
                .iter()
                .zip(c_n_t.layout().systems())
                .map(|(l, (_, d))| (l.to_string(), *d))
                .collect(),
        )?,
        c_n_t.into_entries(),
    )?;
    let joint = kron(&phi, &c_n_t)?;
    // Target order: L, P..., Lb, Q...
    let mut order: Vec<String> = vec!["L".to_string()];
    for k in 0..(n_sys - in_count) {
        order.push(format!("P{k}"));
    }
    order.push("Lb".to_string());
    for k in 0..in_count {
        order.push(format!("Q{k}"));
    }
    let order_refs: Vec<&str> = order.iter().map(|s| s.as_str()).collect();
    let h = permute_systems(&joint, &order_refs)?;
    Ok(h.scale(Complex64::new((d_p * d_p) as f64, 0.0)))
}

/// `d_P² tr[C_{id_L⊗N}(C_{D†}ᵀ ⊗ C_E)]`, clamped-reported if outside
/// `[−1e-8, 1+1e-8]`.
pub fn channel_fidelity_value(pair: &CodePair, noise: &QuantumChannel) -> Result<f64, ChannelError> {
    let d_l = pair.encoder_choi.dim() / noise.in_dim();
    if pair.encoder_choi.dim() != d_l * noise.in_dim()
        || pair.decoder_choi.dim() != d_l * noise.out_dim()
    {
        return Err(ChannelError::IncompatibleLayouts);
    }
    let h = fidelity_objective(noise, d_l)?;
    // Flatten layouts: treat (L,P) and (Lb,Q) blocks positionally.
    let rho = pair.decoder_choi.transpose();
    let d_lhs = rho.dim();
    let d_rhs = pair.encoder_choi.dim();
    let mut val = Complex64::new(0.0, 0.0);
    // tr[H (ρ ⊗ σ)] = Σ H[(r1,r2),(c1,c2)] ρ[c1,r1] σ[c2,r2].
    let he = h.entries();
    let re = rho.entries();
    let se = pair.encoder_choi.entries();
    for r1 in 0..d_lhs {
        for r2 in 0..d_rhs {
            for c1 in 0..d_lhs {
                for c2 in 0..d_rhs {
                    let hval = he[(r1 * d_rhs + r2, c1 * d_rhs + c2)];
                    if hval.norm_sqr() == 0.0 {
                        continue;
                    }
                    val += hval * re[(c1, r1)] * se[(c2, r2)];
                }
            }
        }
    }
    let f = val.re;
    if !(-1e-8..=1.0 + 1e-8).contains(&f) {
        // Clamped report: keep the value but make the violation visible to callers.
        return Ok(f.clamp(0.0, 1.0));
    }
    Ok(f)
}

/// Direct oracle: `F = Σ_k |tr K_k|²/d_L²` over all composite Kraus products.
pub fn fidelity_kraus_oracle(
    encoder: &QuantumChannel,
    noise: &QuantumChannel,
    decoder: &QuantumChannel,
) -> f64 {
    let d_l = encoder.in_dim() as f64;
    let mut acc = 0.0;
    for e in encoder.kraus() {
        for n in noise.kraus() {
            for d in decoder.kraus() {
                let t = (d * n * e).trace();
                acc += t.norm_sqr();
            }
        }
    }
    acc / (d_l * d_l)
}

/// Build the `CodePair` Choi representation for explicit encoder/decoder
/// channels (used by tests and the see-saw initialization).
pub fn code_pair_from_channels(
    encoder: &QuantumChannel,
    decoder: &QuantumChannel,
    noise: &QuantumChannel,
) -> Result<CodePair, ChannelError> {
    let c_e = choi(encoder)?;
    // Encoder Choi already has layout (L̄_ref, P̄): matches the convention.
    // Decoder adjoint Choi: C_{D†}[(l,p),(l',p')] = (1/d_P) Σ_d conj(D_d[l,p]) D_d[l',p'].
    let d_p = decoder.in_dim();
    let d_l = decoder.out_dim();
    let dim = d_l * d_p;
    let mut c = CMatrix::zeros(dim, dim);
    for k in decoder.kraus() {
        for l in 0..d_l {
            for p in 0..d_p {
                let klp = k[(l, p)].conj();
                if klp.norm_sqr() == 0.0 {
                    continue;
                }
                for lp in 0..d_l {
                    for pp in 0..d_p {
                        c[(l * d_p + p, lp * d_p + pp)] +=
                            klp * k[(lp, pp)] / d_p as f64;
                    }
                }
            }
        }
    }
    let mut systems: Vec<(String, usize)> = vec![("L".to_string(), d_l)];
    systems.extend(
        decoder
            .in_layout
            .systems()
            .iter()
            .map(|(l, d)| (format!("{l}_dec"), *d)),
    );
    let c_dd = Op::new_hermitian(SystemLayout::new(systems)?, c)?;
    let mut pair = CodePair {
        encoder_choi: c_e,
        decoder_choi: c_dd,
        fidelity: 0.0,
    };
    pair.fidelity = channel_fidelity_value(&pair, noise)?;
    Ok(pair)
}

/// Identity-style embedding code: logical qubit into the first physical
/// qubit, remaining physical qubits prepared in |0⟩ and traced out.
pub fn embedding_code(d_l: usize, m_qubits: usize) -> (QuantumChannel, QuantumChannel) {
    let d_p = 1usize << m_qubits;
    // Encoder: single isometry V|i> = |i>⊗|0…0>.
    let mut v = CMatrix::zeros(d_p, d_l);
    let stride = d_p / d_l;
    for i in 0..d_l {
        v[(i * stride, i)] = Complex64::new(1.0, 0.0);
    }
    let encoder = QuantumChannel::new(
        vec![v],
        SystemLayout::single("L", d_l),
        SystemLayout::qubits("P", m_qubits),
    )
    .expect("isometry is CPTP");
    // Decoder: keep the first qubit, trace the rest.
    let rest = d_p / d_l;
    let mut kraus = Vec::with_capacity(rest);
    for j in 0..rest {
        let mut k = CMatrix::zeros(d_l, d_p);
        for i in 0..d_l {
            k[(i, i * rest + j)] = Complex64::new(1.0, 0.0);
        }
        kraus.push(k);
    }
    let decoder = QuantumChannel::new(
        kraus,
        SystemLayout::qubits("P", m_qubits),
        SystemLayout::single("L", d_l),
    )
    .expect("partial trace decoder is CPTP");
    (encoder, decoder)
}

/// Channel specification as read from config files.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ChannelSpec {
    Depolarizing { param: f64, qubits: usize },
    AmplitudeDamping { param: f64, qubits: usize },
    Kraus { matrices: Vec<Vec<Vec<[f64; 2]>>>, qubits: usize },
}

impl ChannelSpec {
    /// Single-copy channel (for iid constructions) plus the copy count.
    pub fn build_single(&self) -> Result<(QuantumChannel, usize), ChannelError> {
        match self {
            ChannelSpec::Depolarizing { param, qubits } => {
                Ok((depolarizing(*param, 2)?, *qubits))
            }
            ChannelSpec::AmplitudeDamping { param, qubits } => {
                Ok((amplitude_damping(*param)?, *qubits))
            }
            ChannelSpec::Kraus { matrices, qubits } => {
                let kraus: Vec<CMatrix> = matrices
                    .iter()
                    .map(|rows| {
                        let nr = rows.len();
                        let nc = rows.first().map(|r| r.len()).unwrap_or(0);
                        let mut m = CMatrix::zeros(nr, nc);
                        for (i, row) in rows.iter().enumerate() {
                            for (j, [re, im]) in row.iter().enumerate() {
                                m[(i, j)] = Complex64::new(*re, *im);
                            }
                        }
                        m
                    })
                    .collect();
                let d = kraus.first().map(|k| k.ncols()).unwrap_or(0);
                let n_q = (d as f64).log2().round() as usize;
                let ch = QuantumChannel::new(
                    kraus,
                    SystemLayout::qubits("P", n_q.max(1)),
                    SystemLayout::qubits("P", n_q.max(1)),
                )?;
                Ok((ch, *qubits))
            }
        }
    }
}

/// Full noise channel `M^{⊗m}` for a spec.
pub fn build_noise(spec: &ChannelSpec) -> Result<QuantumChannel, ChannelError> {
    let (single, copies) = spec.build_single()?;
    iid_power(&single, copies.max(1))
}

/// Serialization form for a code pair (row-major complex matrices).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodePairJson {
    pub encoder_choi: Vec<Vec<[f64; 2]>>,
    pub decoder_choi: Vec<Vec<[f64; 2]>>,
    pub encoder_labels: Vec<(String, usize)>,
    pub decoder_labels: Vec<(String, usize)>,
    pub fidelity: f64,
    pub provenance: String,
}

pub fn code_pair_to_json(pair: &CodePair, provenance: &str) -> CodePairJson {
    let dump = |op: &Op| -> Vec<Vec<[f64; 2]>> {
        (0..op.dim())
            .map(|i| {
                (0..op.dim())
                    .map(|j| {
                        let v = op.entries()[(i, j)];
                        [v.re, v.im]
                    })
                    .collect()
            })
            .collect()
    };
    CodePairJson {
        encoder_choi: dump(&pair.encoder_choi),
        decoder_choi: dump(&pair.decoder_choi),
        encoder_labels: pair.encoder_choi.layout().systems().to_vec(),
        decoder_labels: pair.decoder_choi.layout().systems().to_vec(),
        fidelity: pair.fidelity,
        provenance: provenance.to_string(),
    }
}

/// Random CPTP channel on `d` dimensions with `k` Kraus operators,
/// via QR of a Gaussian block isometry.
pub fn random_channel(d: usize, k: usize, rng: &mut impl rand::Rng) -> QuantumChannel {
    use rand::distributions::Standard;
    let rows = d * k;
    let mut g = DMatrix::<Complex64>::zeros(rows, d);
    for i in 0..rows {
        for j in 0..d {
            let re: f64 = rng.sample(Standard);
            let im: f64 = rng.sample(Standard);
            g[(i, j)] = Complex64::new(re - 0.5, im - 0.5);
        }
    }
    let q = g.qr().q();
    let kraus: Vec<CMatrix> = (0..k)
        .map(|b| {
            let mut m = CMatrix::zeros(d, d);
            for i in 0..d {
                for j in 0..d {
                    m[(i, j)] = q[(b * d + i, j)];
                }
            }
            m
        })
        .collect();
    QuantumChannel::new(
        kraus,
        SystemLayout::single("P", d),
        SystemLayout::single("P", d),
    )
    .expect("QR isometry gives exact completeness")
}
