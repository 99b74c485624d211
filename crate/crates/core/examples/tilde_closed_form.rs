//! The representation of the tangent group on L²(O): the closed-form ambiguity against
//! the FFT grid and against the two-step shortcut at off-grid rational points.

use nilweyl::exact::qfrac;
use nilweyl::liecore::{AlgebraElement, Functional, NilpotentAlgebra};
use nilweyl::orbit::OrbitData;
use nilweyl::repgrid::{Representation, TildeRep};
use nilweyl::wpcalc::{
    ambiguity_tilde_closed_form, ambiguity_tilde_closed_form_f64, ambiguity_two_step,
    random_gaussian_vector,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> nilweyl::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = NilpotentAlgebra::heisenberg();
    let orbit = OrbitData::new(&Functional::dual_basis(&g, 0))?;
    let rep = TildeRep::balanced(&orbit, 16)?;
    let f = random_gaussian_vector(&rep, &mut rng);
    let phi = random_gaussian_vector(&rep, &mut rng);
    let a = rep.ambiguity(&f, &phi)?;
    let nx = rep.x_lattice().len();

    let (yi, xi) = (5, 9);
    let x = rep.embed_predual(&rep.x_lattice().point(xi));
    let y = rep.embed_predual(&rep.y_lattice().point(yi));
    let c = ambiguity_tilde_closed_form_f64(&rep, &f, &phi, &x, &y)?;
    println!(
        "node (y {yi}, x {xi}): closed form {c:.12}, grid {:.12}",
        a.values()[yi * nx + xi]
    );

    for _ in 0..3 {
        let mut draw = || {
            AlgebraElement::new(
                &g,
                (0..3)
                    .map(|_| qfrac(rng.gen_range(-8..=8), rng.gen_range(1..=4)))
                    .collect(),
            )
        };
        let (x, y) = (draw()?, draw()?);
        let c = ambiguity_tilde_closed_form(&rep, &f, &phi, &x, &y)?;
        let s = ambiguity_two_step(&rep, &f, &phi, &x, &y)?;
        println!(
            "X = {x:?}, Y = {y:?}: |closed - two-step| = {:.1e}",
            (c - s).norm()
        );
    }
    Ok(())
}
