use fencelab_core::model::{generate, Family, ModelPayload};
use fencelab_core::pattern::extract_pattern;
use std::time::Instant;

fn main() {
    let ModelPayload::Fence(v) = generate(&Family::VBump).unwrap() else { panic!() };
    for depth in 1..=4 {
        let t = Instant::now();
        let p = extract_pattern(&v, depth);
        let links: Vec<usize> = p.levels.iter().map(|l| l.chains.iter().map(|c| c.links.len()).sum()).collect();
        println!("v_bump depth {depth}: links per level {links:?} in {:?}", t.elapsed());
    }
}
