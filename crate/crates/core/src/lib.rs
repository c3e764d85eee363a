//! Finite Brouwer algebras, simulated Muchnik degrees, intuitionistic
//! semantics on algebras and Kripke frames, p-morphisms, and the staged
//! construction of p-morphisms from splitting classes onto finite binary
//! trees.

pub mod brouwer;
pub mod corpus;
pub mod dot;
pub mod logic;
pub mod morphism;
pub mod muchnik;
pub mod order;
pub mod splitting;

pub use brouwer::{
    interval_algebra, quotient, upset_algebra, verify_brouwer, AlgebraError, AlgebraJson,
    BrouwerAlgebra, BrouwerReport, Quotient, UpsetAlgebra,
};
pub use logic::{
    eval_algebra, forces, ipc_check_bounded, parse, theory_contains, Countermodel, Formula,
    IpcVerdict, LogicError, Structure,
};
pub use morphism::{
    search_pmorphism, transfer_check, verify_pmorphism, MorphismError, PMorphism, PMorphismJson,
};
pub use muchnik::{iso_check, muchnik_algebra, muchnik_leq, MassProblem, MuchnikError};
pub use order::{enumerate_upsets, generate_posets, OrderError, Poset, PosetJson, Upset};
pub use splitting::{
    build_pmorphism, build_until_complete, pmorphism_of, split_from_cond_ii,
    verify_splitting_class, PartialHomomorphism, SplittingError, SplittingStructure,
    SyntheticAntichainModel,
};
