//! Exhaustive census of Kronecker modules over a small prime field.

use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;

use super::fp::{bump, Fp};
use super::{fp_tag, Field, StabilityTag};
use crate::error::{Error, Result};

/// Default cap on the number of modules a census may enumerate.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Census {
    pub total: u64,
    pub stable: u64,
    pub strictly_semistable: u64,
    pub unstable: u64,
}

impl Census {
    fn add(&mut self, tag: StabilityTag) {
        self.total += 1;
        match tag {
            StabilityTag::Stable => self.stable += 1,
            StabilityTag::StrictlySemistable => self.strictly_semistable += 1,
            _ => self.unstable += 1,
        }
    }

    fn merge(self, other: Census) -> Census {
        Census {
            total: self.total + other.total,
            stable: self.stable + other.stable,
            strictly_semistable: self.strictly_semistable + other.strictly_semistable,
            unstable: self.unstable + other.unstable,
        }
    }
}

fn unpack(digits: &[u64], h: usize, m: usize, n: usize) -> Vec<Vec<Vec<u64>>> {
    (0..h).map(|j| (0..n).map(|r| digits[(j * n + r) * m..(j * n + r + 1) * m].to_vec()).collect()).collect()
}

/// Classifies every module in `F_p^{h x n x m}`. The space is split by the
/// value of the first matrix; `jobs` workers pull those blocks from a shared
/// counter and the per-worker counts are summed, so the result does not
/// depend on `jobs`.
pub fn census(h: usize, m: usize, n: usize, p: u64, budget: u64, jobs: usize) -> Result<Census> {
    Field::prime(p)?;
    if h < 3 || m == 0 || n == 0 {
        return Err(Error::InvalidModule(format!("census needs h >= 3 and m, n >= 1, got ({h}, {m}, {n})")));
    }
    let entries = h * m * n;
    let needed = BigInt::from(p).pow(entries as u32);
    if needed > BigInt::from(budget) {
        return Err(Error::TooLarge { needed: needed.to_string(), budget });
    }
    let f = Fp::new(p);
    let block = m * n;
    let blocks = p.pow(block as u32);
    let next = AtomicU64::new(0);
    let worker = || {
        let mut local = Census::default();
        loop {
            let b = next.fetch_add(1, Ordering::Relaxed);
            if b >= blocks {
                break local;
            }
            let mut digits = vec![0u64; entries];
            let mut rest = b;
            for d in digits[..block].iter_mut().rev() {
                *d = rest % p;
                rest /= p;
            }
            loop {
                local.add(fp_tag(f, m, n, &unpack(&digits, h, m, n)));
                if !bump(&mut digits[block..], p) {
                    break;
                }
            }
        }
    };
    let jobs = jobs.max(1);
    if jobs == 1 {
        return Ok(worker());
    }
    let total = std::thread::scope(|s| {
        let handles: Vec<_> = (0..jobs).map(|_| s.spawn(worker)).collect();
        handles.into_iter().map(|hd| hd.join().expect("census worker panicked")).fold(Census::default(), Census::merge)
    });
    Ok(total)
}
