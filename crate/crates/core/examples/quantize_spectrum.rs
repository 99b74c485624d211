//! Quantize Gaussian symbols in the Schrödinger model and compare the singular values
//! with the harmonic-oscillator prediction.

use nilweyl::repgrid::{SchrodingerRep, C64};
use nilweyl::wpcalc::{gaussian_symbol, quantize, GaussianSpec};

fn main() -> nilweyl::Result<()> {
    let rep = SchrodingerRep::balanced(64)?;
    for w in [1.0, 1.2, 1.5] {
        let a = gaussian_symbol(
            &rep,
            &GaussianSpec {
                centre: vec![0.0; 2],
                widths: vec![w; 2],
                freq: vec![0.0; 2],
                amp: C64::new(1.0, 0.0),
            },
        );
        let op = quantize(&a, &rep)?;
        let mut s: Vec<f64> = op
            .matrix()
            .clone()
            .singular_values()
            .iter()
            .copied()
            .collect();
        s.sort_by(|x, y| y.total_cmp(x));
        // Op(exp(-β(q²+p²))) = (1+β)⁻¹ ((1-β)/(1+β))^{a†a}
        let beta = 1.0 / (2.0 * w * w);
        let r = (1.0 - beta) / (1.0 + beta);
        println!("width {w}: top singular values");
        for (k, sk) in s.iter().take(4).enumerate() {
            println!(
                "  {k}: {sk:.12}  predicted {:.12}",
                r.powi(k as i32) / (1.0 + beta)
            );
        }
        println!(
            "  self-adjoint defect {:.1e}",
            op.sub(&op.adjoint())?.frobenius_norm()
        );
    }
    Ok(())
}
