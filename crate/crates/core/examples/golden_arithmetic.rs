//! Exact arithmetic in Z[τ] ⊂ Q(√5): parsing, products, conjugates and
//! sign decisions that floating point gets wrong.

use ks600::golden::GoldenNum;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tau = GoldenNum::tau();
    let kappa: GoldenNum = "k".parse()?;

    println!("τ² = {}", tau.clone() * tau.clone());
    println!("τκ = {}", tau.clone() * kappa.clone());
    println!("κ² + κ = {}", kappa.clone() * kappa.clone() + kappa.clone());
    println!("N(2 + 3t) = {}", "2+3t".parse::<GoldenNum>()?.norm());
    println!("1/τ = {}", tau.inverse().expect("τ is a unit"));

    // Consecutive Fibonacci ratios approach τ from alternating sides.
    let (mut a, mut b) = (1i64, 1i64);
    for _ in 0..20 {
        let x = GoldenNum::from_ints(b, -a);
        println!("{b:>6} - {a:>5}τ  sign {:>2}  ≈ {:+.3e}", x.signum(), x.to_f64());
        (a, b) = (b, a + b);
    }
    Ok(())
}
