//! DNA constraint verification, weight enumerators, GC-content subcodes,
//! and re-verifiable bound records.
//!
//! Four constraints are checked: minimum pairwise Hamming distance (HD),
//! distance from reverses (RV), distance from reverse-complements (RC),
//! and fixed GC-content (GC).
//!
//! The RV and RC minimizations exclude coincident pairs, i.e. pairs with
//! `x^r = y` (resp. `x^rc = y`). A code containing both a word and its
//! reverse-complement would otherwise report distance 0 even when every
//! honest pair is far apart; every report states the convention.
//!
//! For linear codes closed under coordinate reversal there are scan-only
//! fast paths: writing the complement as addition of the all-ones vector,
//! the RC minimum is the smallest weight of `z + 1...1` over codewords
//! `z != 1...1`, and the RV minimum is the minimum code weight.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::field::DnaWord;
use crate::linalg::{self, LinearCode};
use crate::{Error, Result};

/// Wording used in every report for the RV/RC minimization convention.
pub const EXCLUSION_CONVENTION: &str = "exclude-coincident-pairs";

/// One of the four DNA code constraints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Constraint {
    Hd,
    Rv,
    Rc,
    Gc,
}

impl Constraint {
    pub fn name(self) -> &'static str {
        match self {
            Constraint::Hd => "HD",
            Constraint::Rv => "RV",
            Constraint::Rc => "RC",
            Constraint::Gc => "GC",
        }
    }
}

impl std::str::FromStr for Constraint {
    type Err = Error;
    fn from_str(s: &str) -> Result<Constraint> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hd" => Ok(Constraint::Hd),
            "rv" => Ok(Constraint::Rv),
            "rc" => Ok(Constraint::Rc),
            "gc" => Ok(Constraint::Gc),
            other => Err(Error::InvalidParameter(format!("unknown constraint {other:?}"))),
        }
    }
}

/// An ordered set of constraints, parsed from forms like `hd,rc,gc`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintSet(Vec<Constraint>);

impl ConstraintSet {
    pub fn new(mut constraints: Vec<Constraint>) -> ConstraintSet {
        constraints.sort_unstable();
        constraints.dedup();
        ConstraintSet(constraints)
    }

    pub fn contains(&self, c: Constraint) -> bool {
        self.0.contains(&c)
    }

    pub fn iter(&self) -> impl Iterator<Item = Constraint> + '_ {
        self.0.iter().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.0.iter().map(|c| c.name().to_string()).collect()
    }
}

impl std::str::FromStr for ConstraintSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<ConstraintSet> {
        let mut out = Vec::new();
        for part in s.split(',') {
            if !part.trim().is_empty() {
                out.push(part.parse()?);
            }
        }
        if out.is_empty() {
            return Err(Error::InvalidParameter("no constraints given".into()));
        }
        Ok(ConstraintSet::new(out))
    }
}

impl fmt::Display for ConstraintSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.0.iter().map(|c| c.name()).collect();
        write!(f, "{}", names.join(","))
    }
}

/// An explicit DNA code: a deduplicated set of equal-length words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DnaCode {
    length: usize,
    words: Vec<DnaWord>,
}

impl DnaCode {
    /// Builds a code from words, sorting and deduplicating. All words must
    /// share one length; an explicit `length` covers the empty code.
    pub fn new(mut words: Vec<DnaWord>, length: usize) -> Result<DnaCode> {
        for w in &words {
            if w.len() != length {
                return Err(Error::LengthMismatch { left: w.len(), right: length });
            }
        }
        words.sort_unstable();
        words.dedup();
        Ok(DnaCode { length, words })
    }

    /// Parses the one-word-per-line text format.
    pub fn parse(text: &str) -> Result<DnaCode> {
        let mut words = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let w = DnaWord::parse(line)
                .map_err(|e| Error::Parse { line: idx + 1, msg: e.to_string() })?;
            words.push(w);
        }
        let length = words.first().map(DnaWord::len).unwrap_or(0);
        DnaCode::new(words, length)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for w in &self.words {
            out.push_str(w.as_str());
            out.push('\n');
        }
        out
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word_length(&self) -> usize {
        self.length
    }

    pub fn words(&self) -> &[DnaWord] {
        &self.words
    }

    pub fn contains(&self, w: &DnaWord) -> bool {
        self.words.binary_search(w).is_ok()
    }

    /// The image of a linear code under the DNA alphabet map.
    pub fn from_linear(code: &LinearCode, cap: u64) -> Result<DnaCode> {
        let words: Vec<DnaWord> =
            linalg::enumerate(code, cap)?.map(|v| v.to_dna()).collect();
        DnaCode::new(words, code.length())
    }
}

/// A complete or GC weight enumerator.
///
/// The complete enumerator counts codewords by their per-symbol counts
/// `(n0, n1, nw, nW)`; the GC enumerator counts by GC-weight, which is the
/// specialization identifying 0 with 1 and w with w2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightEnumerator {
    Complete(BTreeMap<[usize; 4], u64>),
    Gc { length: usize, counts: BTreeMap<usize, u64> },
}

impl WeightEnumerator {
    /// Total count over all terms; always the code size.
    pub fn total(&self) -> u64 {
        match self {
            WeightEnumerator::Complete(m) => m.values().sum(),
            WeightEnumerator::Gc { counts, .. } => counts.values().sum(),
        }
    }

    /// Specializes a complete enumerator to the GC enumerator.
    pub fn specialize_gc(&self) -> WeightEnumerator {
        match self {
            WeightEnumerator::Gc { .. } => self.clone(),
            WeightEnumerator::Complete(m) => {
                let mut out: BTreeMap<usize, u64> = BTreeMap::new();
                let mut length = 0;
                for (&[n0, n1, nw, nw2], &count) in m {
                    length = n0 + n1 + nw + nw2;
                    *out.entry(nw + nw2).or_insert(0) += count;
                }
                WeightEnumerator::Gc { length, counts: out }
            }
        }
    }

    pub fn gc_counts(&self) -> Option<&BTreeMap<usize, u64>> {
        match self {
            WeightEnumerator::Gc { counts, .. } => Some(counts),
            WeightEnumerator::Complete(_) => None,
        }
    }
}

fn push_term(out: &mut String, coeff: u64, factors: &[(char, usize)]) {
    if !out.is_empty() {
        out.push_str(" + ");
    }
    let monomial: String = factors
        .iter()
        .filter(|(_, e)| *e > 0)
        .map(|&(sym, e)| if e == 1 { sym.to_string() } else { format!("{sym}^{e}") })
        .collect();
    if coeff != 1 || monomial.is_empty() {
        out.push_str(&coeff.to_string());
    }
    out.push_str(&monomial);
}

impl fmt::Display for WeightEnumerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        match self {
            WeightEnumerator::Complete(m) => {
                for (&[n0, n1, nw, nw2], &count) in m.iter().rev() {
                    push_term(&mut out, count, &[('a', n0), ('b', n1), ('c', nw), ('d', nw2)]);
                }
            }
            WeightEnumerator::Gc { length, counts } => {
                for (&i, &count) in counts {
                    push_term(&mut out, count, &[('a', length - i), ('b', i)]);
                }
            }
        }
        f.write_str(if out.is_empty() { "0" } else { &out })
    }
}

/// Complete weight enumerator of a linear code.
pub fn cwe(code: &LinearCode, cap: u64, workers: usize) -> Result<WeightEnumerator> {
    let counts = linalg::scan_codewords(
        code,
        cap,
        workers,
        BTreeMap::<[usize; 4], u64>::new,
        |m, w| {
            *m.entry(w.symbol_counts()).or_insert(0) += 1;
        },
        |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        },
    )?;
    Ok(WeightEnumerator::Complete(counts))
}

/// Complete weight enumerator of an explicit DNA code.
pub fn cwe_dna(code: &DnaCode) -> WeightEnumerator {
    let mut counts: BTreeMap<[usize; 4], u64> = BTreeMap::new();
    for w in code.words() {
        *counts.entry(w.to_vector().symbol_counts()).or_insert(0) += 1;
    }
    WeightEnumerator::Complete(counts)
}

/// GC-weight enumerator of a linear code.
pub fn gcw(code: &LinearCode, cap: u64, workers: usize) -> Result<WeightEnumerator> {
    let hist = gc_histogram(code, cap, workers)?;
    let mut out = BTreeMap::new();
    for (i, &count) in hist.iter().enumerate() {
        if count > 0 {
            out.insert(i, count);
        }
    }
    Ok(WeightEnumerator::Gc { length: code.length(), counts: out })
}

/// GC-weight enumerator of an explicit DNA code.
pub fn gcw_dna(code: &DnaCode) -> WeightEnumerator {
    let mut out: BTreeMap<usize, u64> = BTreeMap::new();
    for w in code.words() {
        *out.entry(w.gc_weight()).or_insert(0) += 1;
    }
    WeightEnumerator::Gc { length: code.word_length(), counts: out }
}

/// Codeword counts by GC-weight, as a dense histogram.
pub fn gc_histogram(code: &LinearCode, cap: u64, workers: usize) -> Result<Vec<u64>> {
    let n = code.length();
    linalg::scan_codewords(
        code,
        cap,
        workers,
        || vec![0u64; n + 1],
        |h, w| h[w.gc_weight()] += 1,
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        },
    )
}

/// One pass over a linear code collecting everything a fitness evaluation
/// needs: minimum nonzero weight, the reversible-code RC minimum, and the
/// GC-weight histogram.
#[derive(Clone, Debug)]
pub struct LinearScanStats {
    pub min_weight: Option<usize>,
    /// min over codewords z != all-ones of weight(z + all-ones).
    pub rc_min: Option<usize>,
    pub gc_histogram: Vec<u64>,
}

pub fn scan_linear_stats(code: &LinearCode, cap: u64, workers: usize) -> Result<LinearScanStats> {
    struct Acc {
        min_weight: usize,
        rc_min: usize,
        hist: Vec<u64>,
    }
    let n = code.length();
    let acc = linalg::scan_codewords(
        code,
        cap,
        workers,
        || Acc { min_weight: usize::MAX, rc_min: usize::MAX, hist: vec![0u64; n + 1] },
        |acc, w| {
            let wt = w.weight();
            if wt != 0 && wt < acc.min_weight {
                acc.min_weight = wt;
            }
            let ones = w.count_one_symbols();
            // weight(z + 1...1) = n - #symbols equal to 1; skip z = 1...1.
            if ones != n && n - ones < acc.rc_min {
                acc.rc_min = n - ones;
            }
            acc.hist[w.gc_weight()] += 1;
        },
        |mut a, b| {
            a.min_weight = a.min_weight.min(b.min_weight);
            a.rc_min = a.rc_min.min(b.rc_min);
            for (x, y) in a.hist.iter_mut().zip(b.hist) {
                *x += y;
            }
            a
        },
    )?;
    Ok(LinearScanStats {
        min_weight: (acc.min_weight != usize::MAX).then_some(acc.min_weight),
        rc_min: (acc.rc_min != usize::MAX).then_some(acc.rc_min),
        gc_histogram: acc.hist,
    })
}

/// Minimum of `d(x^rc, y)` over ordered codeword pairs with `x^rc != y`.
///
/// With `reversible` set the code must be closed under coordinate
/// reversal and the value comes from a single scan; otherwise every pair
/// of enumerated codewords is examined. `None` means no admissible pair
/// exists.
pub fn rc_min_distance(
    code: &LinearCode,
    reversible: bool,
    cap: u64,
    workers: usize,
) -> Result<Option<usize>> {
    if reversible {
        Ok(scan_linear_stats(code, cap, workers)?.rc_min)
    } else {
        let dna = DnaCode::from_linear(code, cap)?;
        Ok(rc_min_distance_dna(&dna))
    }
}

/// Minimum of `d(x^r, y)` over ordered codeword pairs with `x^r != y`.
pub fn rv_min_distance(
    code: &LinearCode,
    reversible: bool,
    cap: u64,
    workers: usize,
) -> Result<Option<usize>> {
    if reversible {
        if code.rank() == 0 {
            // Only the zero word, whose reverse coincides with it.
            return Ok(None);
        }
        Ok(Some(linalg::min_weight(code, cap, workers)?))
    } else {
        let dna = DnaCode::from_linear(code, cap)?;
        Ok(rv_min_distance_dna(&dna))
    }
}

/// Exhaustive pair scan for the RC minimum of an explicit DNA code.
pub fn rc_min_distance_dna(code: &DnaCode) -> Option<usize> {
    let mut best: Option<usize> = None;
    for x in code.words() {
        let rcx = x.reverse_complement();
        for y in code.words() {
            if &rcx != y {
                let d = rcx.hamming(y).expect("equal lengths");
                if best.is_none_or(|b| d < b) {
                    best = Some(d);
                }
            }
        }
    }
    best
}

/// Exhaustive pair scan for the RV minimum of an explicit DNA code.
pub fn rv_min_distance_dna(code: &DnaCode) -> Option<usize> {
    let mut best: Option<usize> = None;
    for x in code.words() {
        let rx = x.reverse();
        for y in code.words() {
            if &rx != y {
                let d = rx.hamming(y).expect("equal lengths");
                if best.is_none_or(|b| d < b) {
                    best = Some(d);
                }
            }
        }
    }
    best
}

/// Minimum pairwise Hamming distance of an explicit DNA code.
pub fn hd_min_distance_dna(code: &DnaCode) -> Option<usize> {
    let words = code.words();
    let mut best: Option<usize> = None;
    for i in 0..words.len() {
        for j in (i + 1)..words.len() {
            let d = words[i].hamming(&words[j]).expect("equal lengths");
            if best.is_none_or(|b| d < b) {
                best = Some(d);
            }
        }
    }
    best
}

/// The words of fixed GC-weight `w`, as a DNA code.
pub fn gc_subset(code: &LinearCode, w: usize, cap: u64, workers: usize) -> Result<DnaCode> {
    let words = linalg::scan_codewords(
        code,
        cap,
        workers,
        Vec::new,
        |acc: &mut Vec<DnaWord>, z| {
            if z.gc_weight() == w {
                acc.push(z.to_dna());
            }
        },
        |mut a, mut b| {
            a.append(&mut b);
            a
        },
    )?;
    DnaCode::new(words, code.length())
}

/// GC-weight filter on an explicit DNA code.
pub fn gc_subset_dna(code: &DnaCode, w: usize) -> DnaCode {
    let words: Vec<DnaWord> =
        code.words().iter().filter(|x| x.gc_weight() == w).cloned().collect();
    DnaCode::new(words, code.word_length()).expect("lengths preserved")
}

/// Outcome of one constraint check inside a verification report.
#[derive(Clone, Debug, Serialize)]
pub struct ConstraintOutcome {
    pub constraint: Constraint,
    pub pass: bool,
    /// The computed minimum; `None` when no admissible pair exists, which
    /// passes vacuously.
    pub observed_min: Option<usize>,
    /// A pair realizing the minimum when the constraint fails.
    pub witness: Option<(String, String)>,
}

/// Outcome of the GC-content check.
#[derive(Clone, Debug, Serialize)]
pub struct GcOutcome {
    pub pass: bool,
    pub expected_w: usize,
    /// Words violating the fixed GC-content, capped at a handful.
    pub violations: Vec<String>,
    pub violation_count: usize,
}

/// Full verification report for an explicit DNA code.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub length: usize,
    pub size: usize,
    pub d: usize,
    pub w: Option<usize>,
    pub constraints: Vec<String>,
    pub convention: String,
    /// Flat copies of the observed minima for downstream tooling.
    pub min_distance: Option<usize>,
    pub rv_distance: Option<usize>,
    pub rc_distance: Option<usize>,
    pub hd: Option<ConstraintOutcome>,
    pub rv: Option<ConstraintOutcome>,
    pub rc: Option<ConstraintOutcome>,
    pub gc: Option<GcOutcome>,
    pub all_pass: bool,
}

fn hd_outcome(code: &DnaCode, d: usize) -> ConstraintOutcome {
    let words = code.words();
    let mut best: Option<(usize, usize, usize)> = None;
    for i in 0..words.len() {
        for j in (i + 1)..words.len() {
            let dist = words[i].hamming(&words[j]).expect("equal lengths");
            if best.is_none_or(|(b, _, _)| dist < b) {
                best = Some((dist, i, j));
            }
        }
    }
    match best {
        None => ConstraintOutcome { constraint: Constraint::Hd, pass: true, observed_min: None, witness: None },
        Some((dist, i, j)) => ConstraintOutcome {
            constraint: Constraint::Hd,
            pass: dist >= d,
            observed_min: Some(dist),
            witness: (dist < d)
                .then(|| (words[i].as_str().to_string(), words[j].as_str().to_string())),
        },
    }
}

fn pair_outcome(
    code: &DnaCode,
    d: usize,
    constraint: Constraint,
    map: impl Fn(&DnaWord) -> DnaWord,
) -> ConstraintOutcome {
    let words = code.words();
    let mut best: Option<(usize, usize, usize)> = None;
    for (i, x) in words.iter().enumerate() {
        let mx = map(x);
        for (j, y) in words.iter().enumerate() {
            if &mx != y {
                let dist = mx.hamming(y).expect("equal lengths");
                if best.is_none_or(|(b, _, _)| dist < b) {
                    best = Some((dist, i, j));
                }
            }
        }
    }
    match best {
        None => ConstraintOutcome { constraint, pass: true, observed_min: None, witness: None },
        Some((dist, i, j)) => ConstraintOutcome {
            constraint,
            pass: dist >= d,
            observed_min: Some(dist),
            witness: (dist < d)
                .then(|| (words[i].as_str().to_string(), words[j].as_str().to_string())),
        },
    }
}

/// Checks the requested constraints on an explicit DNA code.
///
/// `w` defaults to half the word length when the GC constraint is
/// requested without an explicit target.
pub fn verify(
    code: &DnaCode,
    d: usize,
    constraints: &ConstraintSet,
    w: Option<usize>,
) -> VerifyReport {
    let w_effective = if constraints.contains(Constraint::Gc) {
        Some(w.unwrap_or(code.word_length() / 2))
    } else {
        w
    };

    let hd = constraints.contains(Constraint::Hd).then(|| hd_outcome(code, d));
    let rv = constraints
        .contains(Constraint::Rv)
        .then(|| pair_outcome(code, d, Constraint::Rv, DnaWord::reverse));
    let rc = constraints
        .contains(Constraint::Rc)
        .then(|| pair_outcome(code, d, Constraint::Rc, DnaWord::reverse_complement));
    let gc = constraints.contains(Constraint::Gc).then(|| {
        let expected = w_effective.expect("set above");
        let violations: Vec<&DnaWord> =
            code.words().iter().filter(|x| x.gc_weight() != expected).collect();
        GcOutcome {
            pass: violations.is_empty(),
            expected_w: expected,
            violation_count: violations.len(),
            violations: violations.iter().take(4).map(|w| w.as_str().to_string()).collect(),
        }
    });

    let all_pass = hd.as_ref().is_none_or(|o| o.pass)
        && rv.as_ref().is_none_or(|o| o.pass)
        && rc.as_ref().is_none_or(|o| o.pass)
        && gc.as_ref().is_none_or(|o| o.pass);

    VerifyReport {
        length: code.word_length(),
        size: code.len(),
        d,
        w: w_effective,
        constraints: constraints.names(),
        convention: EXCLUSION_CONVENTION.to_string(),
        min_distance: hd.as_ref().and_then(|o| o.observed_min),
        rv_distance: rv.as_ref().and_then(|o| o.observed_min),
        rc_distance: rc.as_ref().and_then(|o| o.observed_min),
        hd,
        rv,
        rc,
        gc,
        all_pass,
    }
}

/// Where the groups behind a bound came from; enough to rebuild them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    /// Group descriptors of the form `dihedral:<order>`.
    pub outer_group: String,
    pub block_group: String,
    /// The coefficient grid in its text format.
    pub grid: String,
    pub seed: u64,
    pub budget: u64,
    pub restarts: u32,
    pub cap: u64,
}

/// A verified lower bound with everything needed to re-verify it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRecord {
    /// Outer group order.
    pub n: usize,
    /// Block group order.
    pub k: usize,
    /// Code length n * k.
    pub length: usize,
    pub d: usize,
    pub w: Option<usize>,
    pub constraints: Vec<String>,
    /// Reported code size (the GC subcode size when GC is active), as an
    /// exact decimal string.
    pub size: String,
    pub rank: usize,
    pub min_weight: Option<usize>,
    pub rc_distance: Option<usize>,
    pub rv_distance: Option<usize>,
    pub convention: String,
    /// At even length the best RC-constrained and RV-constrained sizes
    /// coincide, so the bound speaks for both.
    pub even_length_rc_rv_equal: bool,
    pub provenance: Provenance,
}
