//! Threaded driver for the circle counts.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use orbitcount_core::apollonian::{CirclePlan, Histogram};
use orbitcount_core::powerfit::CountSeries;
use orbitcount_core::{Limits, Result, WalkStats};

/// Subtrees handed out per thread; extra tasks smooth out uneven subtrees.
const TASKS_PER_THREAD: usize = 16;

/// Run `plan` on `threads` workers. Counts do not depend on the thread count.
pub fn run_plan(plan: &CirclePlan, threads: usize, limits: &Limits) -> Result<(CountSeries, WalkStats)> {
    let threads = threads.max(1);
    if threads == 1 {
        let (hist, stats) = plan.run(limits)?;
        return Ok((plan.finish(&hist)?, stats));
    }
    let (mut hist, tasks) = plan.split(threads * TASKS_PER_THREAD, limits)?;
    let next = AtomicUsize::new(0);
    let failure = Mutex::new(None);
    let partials: Vec<Histogram> = std::thread::scope(|s| {
        let workers: Vec<_> = (0..threads)
            .map(|_| {
                s.spawn(|| {
                    let mut local: Option<Histogram> = None;
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        if i >= tasks.len() {
                            break;
                        }
                        match plan.run_task(&tasks[i], limits) {
                            Ok(h) => match &mut local {
                                Some(acc) => acc.merge(&h),
                                None => local = Some(h),
                            },
                            Err(e) => {
                                failure.lock().expect("poisoned").get_or_insert(e);
                                next.store(tasks.len(), Ordering::Relaxed);
                                break;
                            }
                        }
                    }
                    local
                })
            })
            .collect();
        workers
            .into_iter()
            .filter_map(|w| w.join().expect("worker panicked"))
            .collect()
    });
    if let Some(e) = failure.into_inner().expect("poisoned") {
        return Err(e);
    }
    for h in &partials {
        hist.merge(h);
    }
    let stats = hist.stats;
    Ok((plan.finish(&hist)?, stats))
}
