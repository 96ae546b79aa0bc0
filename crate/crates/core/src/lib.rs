//! Triangular semilattice code graphs `TSN(n)`.
//!
//! The crate models the lattice DAG whose vertices are the integer points
//! `(x, y)` with `x + y < n`, edges pointing from `(x + 1, y)` and `(x, y + 1)`
//! down to `(x, y)`, and the `n` top-level vertices acting as sources. On top of
//! that it provides:
//!
//! * [`placement`]: receiver placements, the triangle criterion for validity
//!   and an independent vertex-disjoint path oracle, plus the census of valid
//!   placements;
//! * [`minors`]: the signed path-system expansion of a placement's maximal
//!   minor, along with the brute-force and symbolic-determinant oracles;
//! * [`gf`]: small finite fields with table arithmetic and point spaces;
//! * [`solver`]: solvability of receiver sets over `F_q`, evaluation tables and
//!   the set censuses built on them.
//!
//! Everything here is `no_std` + `alloc`; threading, IO and the command line
//! live in the companion `tsn` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
pub mod flow;
pub mod gf;
pub mod lattice;
pub mod minors;
pub mod placement;
pub mod poly;
pub mod solver;

pub use error::{Error, Result};
pub use gf::{Field, PointSpace};
pub use lattice::{EdgeVar, Lattice, Side, Triangle, Vertex};
pub use minors::{MinorPolynomial, PathSystem, Term, VarSet};
pub use placement::{CensusRow, Placement};
pub use poly::Poly;
pub use solver::{EvalTable, ReceiverSet, SolveResult};

/// Binomial coefficient, saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return u64::MAX;
        }
    }
    acc as u64
}

#[cfg(test)]
mod tests {
    use super::binomial;

    #[test]
    fn binomial_small() {
        assert_eq!(binomial(10, 4), 210);
        assert_eq!(binomial(150, 2), 11175);
        assert_eq!(binomial(150, 3), 551300);
        assert_eq!(binomial(45, 9), 886163135);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(0, 0), 1);
    }
}
