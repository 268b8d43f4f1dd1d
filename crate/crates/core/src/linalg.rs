//! Row reduction, codeword enumeration, membership, and minimum weight
//! over GF(4).
//!
//! Codes are held as a reduced row-echelon basis, so the code size is
//! exactly 4^rank. Enumeration walks coefficient tuples in odometer order
//! (least significant digit first), updating a single scratch vector with
//! one scaled row addition per rolled digit; the order is part of the
//! contract so that partitioned scans reduce identically regardless of the
//! number of workers.

use crate::field::{Gf4, Gf4Vector};
use crate::{Error, Result};

/// Default enumeration cap: 4^12 codewords.
pub const DEFAULT_CAP: u64 = 1 << 24;

/// Scans shorter than this stay sequential even when more workers are
/// allowed; the split must never change results, only timing.
const PARALLEL_THRESHOLD: u64 = 1 << 17;

/// A linear code over GF(4) held as a reduced row-echelon basis.
///
/// Basis rows have strictly increasing pivot columns, unit pivots, and
/// zeros above and below each pivot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    length: usize,
    basis: Vec<Gf4Vector>,
    pivots: Vec<usize>,
}

impl LinearCode {
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Gf4Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Code size 4^rank, if it fits in a `u128`.
    pub fn size(&self) -> Option<u128> {
        if self.rank() <= 63 {
            Some(1u128 << (2 * self.rank()))
        } else {
            None
        }
    }

    /// Exact code size as a decimal string.
    pub fn size_string(&self) -> String {
        (num_bigint::BigUint::from(1u8) << (2 * self.rank())).to_string()
    }
}

/// Gaussian elimination to reduced row-echelon form.
///
/// `length` declares the ambient dimension so that an empty input yields
/// the rank-0 code of the right length.
pub fn reduce(rows: &[Gf4Vector], length: usize) -> Result<LinearCode> {
    for row in rows {
        if row.len() != length {
            return Err(Error::LengthMismatch { left: row.len(), right: length });
        }
    }
    let mut work: Vec<Gf4Vector> = rows.iter().filter(|r| !r.is_zero()).cloned().collect();
    let mut pivots: Vec<usize> = Vec::new();

    let mut next = 0usize;
    for col in 0..length {
        let Some(found) = (next..work.len()).find(|&r| !work[r].get(col).is_zero()) else {
            continue;
        };
        work.swap(next, found);
        let inv = work[next].get(col).inverse().expect("pivot is nonzero");
        work[next] = work[next].scale(inv);
        let pivot_row = work[next].clone();
        // Eliminate above and below, so earlier basis rows end up cleared
        // in this pivot column as well.
        for (r, row) in work.iter_mut().enumerate() {
            if r != next {
                let c = row.get(col);
                if !c.is_zero() {
                    row.add_assign_scaled(&pivot_row, c);
                }
            }
        }
        pivots.push(col);
        next += 1;
        if next == work.len() {
            break;
        }
    }
    work.truncate(next);
    Ok(LinearCode { length, basis: work, pivots })
}

/// Membership test: `v` reduces to zero against the basis.
pub fn contains(code: &LinearCode, v: &Gf4Vector) -> Result<bool> {
    if v.len() != code.length {
        return Err(Error::LengthMismatch { left: v.len(), right: code.length });
    }
    let mut w = v.clone();
    for (row, &p) in code.basis.iter().zip(&code.pivots) {
        let c = w.get(p);
        if !c.is_zero() {
            w.add_assign_scaled(row, c);
        }
    }
    Ok(w.is_zero())
}

fn check_cap(code: &LinearCode, cap: u64) -> Result<u64> {
    let rank = code.rank();
    let needed: u128 = if rank <= 63 { 1u128 << (2 * rank) } else { u128::MAX };
    if needed > cap as u128 {
        return Err(Error::CapExceeded { rank, needed, cap });
    }
    Ok(needed as u64)
}

/// Odometer walk over the coefficient space of `code`, visiting the range
/// `[start, end)` of the deterministic enumeration order.
///
/// Codeword `i` is `sum_j digit_j(i) * basis_j` with base-4 digits read
/// least significant first, so index 0 is the zero vector.
struct Odometer<'a> {
    code: &'a LinearCode,
    digits: Vec<u8>,
    scratch: Gf4Vector,
    index: u64,
    end: u64,
}

impl<'a> Odometer<'a> {
    fn new(code: &'a LinearCode, start: u64, end: u64) -> Odometer<'a> {
        let rank = code.rank();
        let mut digits = vec![0u8; rank];
        let mut scratch = Gf4Vector::zeros(code.length());
        let mut rest = start;
        for (j, d) in digits.iter_mut().enumerate() {
            *d = (rest & 3) as u8;
            rest >>= 2;
            if *d != 0 {
                scratch.add_assign_scaled(&code.basis[j], Gf4::from_bits(*d));
            }
        }
        Odometer { code, digits, scratch, index: start, end }
    }

    /// Calls `f` on every codeword of the range in order.
    fn for_each(mut self, mut f: impl FnMut(&Gf4Vector)) {
        while self.index < self.end {
            f(&self.scratch);
            self.index += 1;
            if self.index >= self.end {
                break;
            }
            // Advance the base-4 odometer; each digit change XORs a scaled
            // basis row into the scratch vector.
            for (j, d) in self.digits.iter_mut().enumerate() {
                let old = *d;
                let new = (old + 1) & 3;
                *d = new;
                self.scratch.add_assign_scaled(&self.code.basis[j], Gf4::from_bits(old ^ new));
                if new != 0 {
                    break;
                }
            }
        }
    }
}

/// Folds a visitor over every codeword, optionally splitting the index
/// space across worker threads. The per-range results are merged in range
/// order, so the outcome does not depend on the worker count.
pub fn scan_codewords<T, FInit, FStep, FMerge>(
    code: &LinearCode,
    cap: u64,
    workers: usize,
    init: FInit,
    step: FStep,
    merge: FMerge,
) -> Result<T>
where
    T: Send,
    FInit: Fn() -> T + Sync,
    FStep: Fn(&mut T, &Gf4Vector) + Sync,
    FMerge: Fn(T, T) -> T,
{
    let total = check_cap(code, cap)?;
    let workers = workers.max(1);
    if workers == 1 || total < PARALLEL_THRESHOLD {
        let mut acc = init();
        Odometer::new(code, 0, total).for_each(|w| step(&mut acc, w));
        return Ok(acc);
    }

    let chunk = total.div_ceil(workers as u64);
    let ranges: Vec<(u64, u64)> = (0..workers as u64)
        .map(|i| (i * chunk, ((i + 1) * chunk).min(total)))
        .filter(|(s, e)| s < e)
        .collect();
    let parts: Vec<T> = std::thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .iter()
            .map(|&(s, e)| {
                let init = &init;
                let step = &step;
                scope.spawn(move || {
                    let mut acc = init();
                    Odometer::new(code, s, e).for_each(|w| step(&mut acc, w));
                    acc
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("scan worker panicked")).collect()
    });
    let mut iter = parts.into_iter();
    let first = iter.next().expect("at least one range");
    Ok(iter.fold(first, merge))
}

/// Iterator over all codewords in the deterministic enumeration order,
/// starting from the zero vector.
pub fn enumerate(code: &LinearCode, cap: u64) -> Result<CodewordIter<'_>> {
    let total = check_cap(code, cap)?;
    Ok(CodewordIter { odo: Odometer::new(code, 0, total), done: false })
}

pub struct CodewordIter<'a> {
    odo: Odometer<'a>,
    done: bool,
}

impl Iterator for CodewordIter<'_> {
    type Item = Gf4Vector;

    fn next(&mut self) -> Option<Gf4Vector> {
        if self.done || self.odo.index >= self.odo.end {
            return None;
        }
        let out = self.odo.scratch.clone();
        self.odo.index += 1;
        if self.odo.index < self.odo.end {
            for (j, d) in self.odo.digits.iter_mut().enumerate() {
                let old = *d;
                let new = (old + 1) & 3;
                *d = new;
                self.odo
                    .scratch
                    .add_assign_scaled(&self.odo.code.basis[j], Gf4::from_bits(old ^ new));
                if new != 0 {
                    break;
                }
            }
        } else {
            self.done = true;
        }
        Some(out)
    }
}

/// Minimum Hamming weight over the nonzero codewords, which equals the
/// minimum distance of the code.
pub fn min_weight(code: &LinearCode, cap: u64, workers: usize) -> Result<usize> {
    if code.rank() == 0 {
        return Err(Error::RankZero);
    }
    let best = scan_codewords(
        code,
        cap,
        workers,
        || usize::MAX,
        |acc, w| {
            let wt = w.weight();
            if wt != 0 && wt < *acc {
                *acc = wt;
            }
        },
        |a, b| a.min(b),
    )?;
    Ok(best)
}
