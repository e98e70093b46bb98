//! Order-preserving parallel primitives for building working sets and
//! frontiers: exclusive prefix sums, list concatenation and filtering.
//!
//! Every function here returns the same bytes for every thread count; the
//! solver's determinism rests on that.

use rayon::prelude::*;

/// Below this many elements the serial loop beats task setup.
const SERIAL_CUTOFF: usize = 1 << 12;

/// Exclusive prefix sum over `xs`. Returns the offsets and the grand total.
pub fn exclusive_prefix_sum(xs: &[usize]) -> (Vec<usize>, usize) {
    if xs.len() <= SERIAL_CUTOFF {
        let mut offsets = Vec::with_capacity(xs.len());
        let mut acc = 0usize;
        for &x in xs {
            offsets.push(acc);
            acc += x;
        }
        return (offsets, acc);
    }
    // Block scan: parallel per-chunk totals, a short serial scan over those,
    // then each chunk writes its own offsets shifted by its base.
    let mut bases: Vec<usize> = xs
        .par_chunks(SERIAL_CUTOFF)
        .map(|chunk| chunk.iter().sum())
        .collect();
    let mut acc = 0usize;
    for base in bases.iter_mut() {
        let total = *base;
        *base = acc;
        acc += total;
    }
    let mut offsets = vec![0usize; xs.len()];
    offsets
        .par_chunks_mut(SERIAL_CUTOFF)
        .zip(xs.par_chunks(SERIAL_CUTOFF))
        .zip(bases.par_iter())
        .for_each(|((out, chunk), &base)| {
            let mut run = base;
            for (slot, &x) in out.iter_mut().zip(chunk) {
                *slot = run;
                run += x;
            }
        });
    (offsets, acc)
}

struct SendPtr(*mut u32);
unsafe impl Send for SendPtr {}
unsafe impl Sync for SendPtr {}

impl SendPtr {
    fn get(&self) -> *mut u32 {
        self.0
    }
}

/// Concatenates the lists in order into one vector.
pub fn concat_lists<L: AsRef<[u32]> + Sync>(lists: &[L]) -> Vec<u32> {
    let lens: Vec<usize> = lists.iter().map(|l| l.as_ref().len()).collect();
    let (offsets, total) = exclusive_prefix_sum(&lens);
    let mut out = vec![0u32; total];
    let base = SendPtr(out.as_mut_ptr());
    lists
        .par_iter()
        .zip(offsets.par_iter())
        .for_each(|(list, &off)| {
            let src = list.as_ref();
            // The windows [off, off + len) partition the output: offsets are
            // the exclusive prefix sums of the lengths, so they are disjoint.
            unsafe {
                std::ptr::copy_nonoverlapping(src.as_ptr(), base.get().add(off), src.len());
            }
        });
    out
}

/// Keeps the items satisfying `pred`, preserving their order.
pub fn par_filter<F>(items: &[u32], pred: F) -> Vec<u32>
where
    F: Fn(u32) -> bool + Sync,
{
    let kept: Vec<Vec<u32>> = items
        .par_chunks(SERIAL_CUTOFF)
        .map(|chunk| chunk.iter().copied().filter(|&v| pred(v)).collect())
        .collect();
    concat_lists(&kept)
}

/// Filters the ids `0..n`, preserving increasing order.
pub fn par_filter_range<F>(n: usize, pred: F) -> Vec<u32>
where
    F: Fn(u32) -> bool + Sync,
{
    let chunks = n.div_ceil(SERIAL_CUTOFF).max(1);
    let kept: Vec<Vec<u32>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * SERIAL_CUTOFF;
            let hi = ((c + 1) * SERIAL_CUTOFF).min(n);
            (lo..hi).map(|v| v as u32).filter(|&v| pred(v)).collect()
        })
        .collect();
    concat_lists(&kept)
}
