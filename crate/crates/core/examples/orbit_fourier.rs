//! The orbit Fourier transform: unitary on the grid, Gaussians go to Gaussians.

use nilweyl::liecore::{Functional, NilpotentAlgebra};
use nilweyl::orbit::OrbitData;
use nilweyl::repgrid::{Representation, TildeRep, C64};
use nilweyl::wpcalc::{gaussian_symbol, inverse_orbit_fourier, orbit_fourier, GaussianSpec};

fn main() -> nilweyl::Result<()> {
    let orbit = OrbitData::new(&Functional::dual_basis(&NilpotentAlgebra::heisenberg(), 0))?;
    let rep = TildeRep::balanced(&orbit, 64)?;
    // symbols of the tangent-group representation live on a 2d-dimensional orbit
    let k = rep.symbol_lattice().axes().len();
    let a = gaussian_symbol(
        &rep,
        &GaussianSpec {
            centre: vec![0.0; k],
            widths: vec![1.0; k],
            freq: vec![0.0; k],
            amp: C64::new(1.0, 0.0),
        },
    );
    println!("{k} symbol axes, {} nodes", a.len());
    let ahat = orbit_fourier(&rep, &a)?;
    println!("|a| = {:.15}  |â| = {:.15}", a.norm(), ahat.norm());

    let mut err: f64 = 0.0;
    rep.predual_lattice().for_each_point(|i, x| {
        let g = (-x.iter().map(|v| v * v).sum::<f64>() / 2.0).exp();
        err = err.max((ahat.values()[i] - g).norm());
    });
    println!("max |â - exp(-|X|²/2)| = {err:.2e}");
    let back = inverse_orbit_fourier(&rep, &ahat)?;
    println!("round trip relative error = {:.2e}", back.rel_dist(&a)?);
    Ok(())
}
