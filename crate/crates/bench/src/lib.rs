//! Fixed instances shared by the benchmarks.

use quatseq_core::PrimePowerParams;

/// One instance per residue class of `p mod 8`, plus a larger prime power.
pub const INSTANCES: [(u64, u32); 5] = [(17, 2), (3, 6), (13, 2), (23, 2), (7, 4)];

pub fn instances() -> Vec<PrimePowerParams> {
    INSTANCES
        .iter()
        .map(|&(p, m)| PrimePowerParams::new(p, m).expect("benchmark instance is valid"))
        .collect()
}
