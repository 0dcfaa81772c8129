//! Threaded exhaustive LHV search over disjoint ranges of the `y` space.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use std::thread;

use ghzlab_core::lhv::{search_range, ConstraintSystem, LhvAssignment};

use crate::error::AppError;
use crate::limits::Limits;

const CHUNK: u64 = 1 << 16;

/// The first satisfying assignment in flat index order, or `None` if the
/// system is unsatisfiable. Matches the sequential search exactly.
pub fn parallel_search(
    cs: &ConstraintSystem,
    limits: &Limits,
) -> Result<Option<LhvAssignment>, AppError> {
    let space = cs.y_space();
    if space > limits.max_search_points {
        return Err(AppError::Param(format!(
            "search space {space} exceeds the cap {}",
            limits.max_search_points
        )));
    }
    let space = space as u64;
    let workers = thread::available_parallelism().map_or(1, |n| n.get());
    if workers == 1 || space <= CHUNK {
        return Ok(search_range(cs, 0..space));
    }
    let next = AtomicU64::new(0);
    // start of the earliest chunk known to hold a solution
    let best = AtomicU64::new(u64::MAX);
    let found: Mutex<Option<(u64, LhvAssignment)>> = Mutex::new(None);
    thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let start = next.fetch_add(CHUNK, Ordering::Relaxed);
                if start >= space || start > best.load(Ordering::Relaxed) {
                    break;
                }
                let end = (start + CHUNK).min(space);
                if let Some(a) = search_range(cs, start..end) {
                    best.fetch_min(start, Ordering::Relaxed);
                    let mut slot = found.lock().unwrap();
                    if slot.as_ref().is_none_or(|(s0, _)| start < *s0) {
                        *slot = Some((start, a));
                    }
                    break;
                }
            });
        }
    });
    Ok(found.into_inner().unwrap().map(|(_, a)| a))
}
