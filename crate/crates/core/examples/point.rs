//! One parameter point end to end: ground state, Bell violation, concurrence.

use xxz_gmn::{
    global_ground, gme_concurrence, maximize, BellTarget, ChainParams, OptimizerConfig, SiteCount,
};

fn main() -> xxz_gmn::Result<()> {
    let p = ChainParams::new(SiteCount::new(6)?, 2.0, -0.8);
    let ground = global_ground(&p)?;
    let bell = maximize(BellTarget::Ground(&ground), &OptimizerConfig::default())?;
    let gme = gme_concurrence(&ground);
    println!(
        "k={} violation={:.6} concurrence={:.6} across {}",
        ground.k, bell.value, gme.value, gme.minimizing_partition
    );
    Ok(())
}
