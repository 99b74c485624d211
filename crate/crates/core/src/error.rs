use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("elements belong to different Lie algebras")]
    MismatchedAlgebra,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("structure constants violate antisymmetry at [{i},{j}] component {k}")]
    Antisymmetry { i: usize, j: usize, k: usize },

    #[error("Jacobi identity fails for basis triple ({i},{j},{k})")]
    Jacobi { i: usize, j: usize, k: usize },

    #[error("basis is not Jordan-Hölder: [X{i}, X{j}] has a component along X{k} outside the lower flag ideal")]
    NotJordanHolder { i: usize, j: usize, k: usize },

    #[error("Lie algebra is not nilpotent")]
    NotNilpotent,

    #[error("nilpotency class {class} exceeds the supported BCH depth {max}")]
    BchDepth { class: usize, max: usize },

    #[error("action of basis element {index} is not a derivation of the ideal")]
    NotDerivation { index: usize },

    #[error("action is not a Lie homomorphism on basis pair ({i},{j})")]
    NotHomomorphism { i: usize, j: usize },

    #[error("action of basis element {index} is not unipotent")]
    NotUnipotent { index: usize },

    #[error("orbit chart cannot be triangularized: {0}")]
    Triangularization(String),

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("grid with {nodes} nodes exceeds the cap of {cap}")]
    GridTooLarge { nodes: usize, cap: usize },

    #[error("insufficient decay: {0}")]
    InsufficientDecay(String),

    #[error("aliasing: {0}")]
    Aliasing(String),

    #[error(
        "coadjoint action is not affine in chart coordinates; enable interpolation to resample"
    )]
    NonAffineAction,

    #[error("unsupported representation regime: {0}")]
    UnsupportedRegime(String),

    #[error("domain mismatch: {0}")]
    Domain(String),

    #[error("invalid exponent {0}: must lie in [1, ∞]")]
    Exponent(f64),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
