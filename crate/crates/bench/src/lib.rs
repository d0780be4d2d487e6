//! Fixtures shared by the benchmarks.

use dstlab_core::indefinite::{random_projector, DiscreteSpacetime, FermionicProjector};
use dstlab_core::lattice::{two_state_occupation, LatticeGeometry, LatticeOccupation};

pub fn projector(n: usize, m: usize, f: usize) -> FermionicProjector {
    random_projector(DiscreteSpacetime::new(n, m).expect("valid size"), f, 7).expect("feasible rank")
}

/// The 8×6 lattice with two boosted states.
pub fn lattice_system() -> (LatticeGeometry, LatticeOccupation) {
    let mut occ = two_state_occupation();
    occ.states[0].tau = 1.5;
    occ.states[1].tau = 1.0;
    (LatticeGeometry::new(8, 6).expect("valid size"), occ)
}
