//! Exact arithmetic over Q, Q(t) and the polynomial rings built on them.

pub mod bipoly;
pub mod fp;
pub mod frac;
mod kronecker;
pub mod linsolve;
mod modgcd;
pub mod modsolve;
pub mod newton;
pub mod poly;
pub mod quadratic;
pub mod rational;
pub mod ring;

pub use bipoly::BiPoly;
pub use fp::Fp;
pub use frac::{BPoly, BRatFunc, Frac, QPoly, RatFuncT, UPoly, URatFunc};
pub use newton::{newton_valuations, RootClass, ValuationProfile};
pub use poly::{Pretty, UniPoly};
pub use quadratic::{QuadElem, QuadModulus};
pub use rational::{format_rational, int, parse_rational, rat, Rational};
pub use ring::{Field, GcdDomain, Ring, TValuation};
