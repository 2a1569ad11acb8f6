//! Bounded share-nothing worker pool for batch trials. Results land in their
//! trial slot, so output order never depends on completion order.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// Worker count: `TREESPEC_WORKERS` when set, otherwise the available
/// parallelism capped at 8.
pub fn worker_count() -> usize {
    if let Ok(value) = std::env::var("TREESPEC_WORKERS") {
        if let Ok(n) = value.parse::<usize>() {
            if n >= 1 {
                return n;
            }
        }
    }
    std::thread::available_parallelism()
        .map(|n| n.get().min(8))
        .unwrap_or(1)
}

/// Run `f(0..count)` on `workers` threads; the result vector is indexed by
/// trial regardless of which worker ran it.
pub fn run_parallel<T, F>(count: usize, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let workers = workers.max(1).min(count.max(1));
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<T>>> = (0..count).map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let index = next.fetch_add(1, Ordering::Relaxed);
                if index >= count {
                    break;
                }
                let result = f(index);
                *slots[index].lock().expect("result slot") = Some(result);
            });
        }
    });
    slots
        .into_iter()
        .map(|slot| {
            slot.into_inner()
                .expect("result slot")
                .expect("every trial ran")
        })
        .collect()
}
