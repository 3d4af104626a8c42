//! Quantum torus arithmetic over `Z[v, v^-1]`.

mod coeff;
mod divide;
mod elem;
mod expvec;

pub use coeff::{in_m, in_window, VCoeff};
pub use divide::{exact_divide, exact_divide_left};
pub use elem::{BilinearForm, QTElem};
pub use expvec::ExpVec;
