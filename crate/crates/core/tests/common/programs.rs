//! Random loop-free programs over a small memory.

use lolli_core::lang::{Memory, Program};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A location expression: mostly a literal location, sometimes computed.
fn location(rng: &mut ChaCha8Rng, locs: u64, depth: u32) -> Program {
    if depth == 0 || rng.gen_bool(0.8) {
        Program::Num(rng.gen_range(0..locs))
    } else {
        expr(rng, locs, depth - 1)
    }
}

/// Loop-free program with values below 100 at the leaves.
pub fn expr(rng: &mut ChaCha8Rng, locs: u64, depth: u32) -> Program {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.5) {
            Program::Num(rng.gen_range(0..100))
        } else {
            Program::deref(location(rng, locs, 0))
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..7) {
        0 => Program::add(expr(rng, locs, d), expr(rng, locs, d)),
        1 => Program::sub(expr(rng, locs, d), expr(rng, locs, d)),
        2 => Program::gt(expr(rng, locs, d), expr(rng, locs, d)),
        3 => Program::deref(location(rng, locs, d)),
        4 | 5 => Program::assign(location(rng, locs, d), expr(rng, locs, d)),
        _ => Program::seq(expr(rng, locs, d), expr(rng, locs, d)),
    }
}

/// Memory defined at `0..locs` with values below 100.
pub fn memory(rng: &mut ChaCha8Rng, locs: u64) -> Memory {
    (0..locs).map(|l| (l, rng.gen_range(0..100))).collect()
}
