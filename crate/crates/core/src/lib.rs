//! Computational toolkit for torus fibrations and their degenerations:
//! amoebas of Laurent polynomials with Ronkin functions and spines,
//! monodromy of discriminant graphs, and local special Lagrangian models.

pub mod amoeba;
pub mod gamma;
pub mod intlin;
pub mod laurent;
pub mod local;
pub mod monodromy;
