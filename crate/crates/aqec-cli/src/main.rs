fn main() { println!("aqec"); }
