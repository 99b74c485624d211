//! Mixed modulation norms on the orbit of heis3 and the Schur bound for the embedding of
//! modulation spaces into L² of the orbit.

use nilweyl::liecore::{Functional, NilpotentAlgebra};
use nilweyl::modspace::{mod_norm, schur_bound, schur_embedding_constant, PredualSplit};
use nilweyl::orbit::OrbitData;
use nilweyl::repgrid::{gaussian_window, TildeRep};
use nilweyl::wpcalc::random_gaussian_vector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> nilweyl::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let orbit = OrbitData::new(&Functional::dual_basis(&NilpotentAlgebra::heisenberg(), 0))?;
    let rep = TildeRep::balanced(&orbit, 32)?;
    let phi = gaussian_window(&rep, 0.9)?;
    let f = random_gaussian_vector(&rep, &mut rng);
    let split = PredualSplit::default_for(&rep);
    println!("inner {:?}  outer {:?}", split.inner(), split.outer());
    println!("|f| |phi| = {:.12}", f.norm() * phi.function().norm());
    for (r, s) in [
        (2.0, 2.0),
        (1.0, 1.0),
        (1.0, f64::INFINITY),
        (f64::INFINITY, 1.0),
        (4.0, 2.0),
    ] {
        println!(
            "M^({r}, {s}) = {:.12}",
            mod_norm(&f, phi.function(), r, s, &split, &rep)?
        );
    }

    let bound = schur_bound(&rep, phi.function())?;
    println!("Schur bound {bound:.12}");
    let k = schur_embedding_constant(&rep, phi.function(), 20, &mut rng)?;
    println!(
        "largest observed ratio {:.6} over {} inputs, analytic {:.6}",
        k.empirical, k.samples, k.analytic
    );
    Ok(())
}
