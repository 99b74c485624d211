//! Decay of the ambiguity function as a smoothness test: smooth vectors score high,
//! point masses score zero.

use nilweyl::liecore::{Functional, NilpotentAlgebra};
use nilweyl::orbit::OrbitData;
use nilweyl::repgrid::{
    gaussian_smooth, gaussian_window, Representation, SchrodingerRep, TildeRep, C64,
};
use nilweyl::wpcalc::smoothness_score;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> nilweyl::Result<()> {
    let orbit = OrbitData::new(&Functional::dual_basis(&NilpotentAlgebra::heisenberg(), 0))?;
    let rep = TildeRep::balanced(&orbit, 64)?;
    let phi0 = gaussian_window(&rep, 1.0)?;
    let mut delta = vec![C64::new(0.0, 0.0); rep.hilbert_lattice().len()];
    delta[rep.hilbert_lattice().origin_index()] = C64::new(1.0, 0.0);
    let delta = rep.new_vector(delta)?;
    println!(
        "gaussian {:.3}",
        smoothness_score(phi0.function(), &phi0, &rep)?
    );
    println!(
        "delta    {:.3}",
        smoothness_score(&delta, &phi0, &rep)? + 0.0
    );

    let s = SchrodingerRep::balanced(128)?;
    let w = gaussian_window(&s, 1.0)?;
    // rough noise under a Gaussian envelope, then heat-smoothed
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let xs: Vec<f64> = (0..s.n())
        .map(|i| s.hilbert_lattice().axes()[0].coord(i))
        .collect();
    let rough = s.new_vector(
        xs.iter()
            .map(|x| {
                C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5) * (-x * x / 8.0).exp()
            })
            .collect(),
    )?;
    for width in [0.0, 0.125, 0.25, 0.5] {
        let g = gaussian_smooth(&rough, width);
        println!(
            "noise smoothed by {width}: {:.3}",
            smoothness_score(&g, &w, &s)?
        );
    }
    Ok(())
}
