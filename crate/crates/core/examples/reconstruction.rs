//! Weak reconstruction of a vector from its ambiguity function against a Gaussian window.

use nilweyl::liecore::{Functional, NilpotentAlgebra};
use nilweyl::orbit::OrbitData;
use nilweyl::repgrid::{gaussian_window, TildeRep};
use nilweyl::wpcalc::{random_gaussian_vector, reconstruct, reconstruct_with};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> nilweyl::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for g in [
        NilpotentAlgebra::heisenberg(),
        NilpotentAlgebra::filiform4(),
    ] {
        let orbit = OrbitData::new(&Functional::dual_basis(&g, 0))?;
        let rep = TildeRep::balanced(&orbit, 64)?;
        let phi0 = gaussian_window(&rep, 1.0)?;
        let f = random_gaussian_vector(&rep, &mut rng);
        let back = reconstruct(&f, &phi0, &rep)?;
        let phi = random_gaussian_vector(&rep, &mut rng);
        let other = reconstruct_with(&f, &phi0, &phi, &rep)?;
        let want = f.scale(phi.inner(phi0.function())?);
        println!(
            "{:<10} reference window {:.2e}  second window {:.2e}",
            g.name(),
            back.rel_dist(&f)?,
            other.rel_dist(&want)?
        );
    }
    Ok(())
}
