//! Generator matrix constructions from group rings and group matrix rings.
//!
//! For a group ring element v over a listed group, `sigma` produces the
//! square matrix whose (i, j) entry is the coefficient of v at
//! `g_i^{-1} g_j`; its row space is the classical group code of v.
//!
//! `build_generator` nests the construction: a coefficient grid assigns a
//! length-k coefficient row to each element of an outer group of order n,
//! and the kn x kn generator has the k x k sigma image of row
//! `g_i^{-1} g_j` as its (i, j) block. When both listings are reversible,
//! the row space is closed under full coordinate reversal, which is what
//! makes these codes usable as DNA codes.

use crate::field::{Gf4, Gf4Vector};
use crate::group::{GroupSpec, ReversibleListing};
use crate::linalg::{self, LinearCode};
use crate::{Error, Result};

/// An element of the group ring: one GF(4) coefficient per listed element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingElement {
    group: GroupSpec,
    coeffs: Gf4Vector,
}

impl GroupRingElement {
    pub fn new(group: GroupSpec, coeffs: Gf4Vector) -> Result<GroupRingElement> {
        if coeffs.len() != group.order() {
            return Err(Error::LengthMismatch { left: coeffs.len(), right: group.order() });
        }
        Ok(GroupRingElement { group, coeffs })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn coeffs(&self) -> &Gf4Vector {
        &self.coeffs
    }

    /// Group ring product by convolution: the coefficient of `g` in the
    /// product is the sum of `a_i b_j` over all pairs with `g_i g_j = g`.
    pub fn mul(&self, other: &GroupRingElement) -> Result<GroupRingElement> {
        if self.group != other.group {
            return Err(Error::InvalidParameter(
                "group ring product requires the same listed group".into(),
            ));
        }
        let n = self.group.order();
        let mut out = Gf4Vector::zeros(n);
        for i in 0..n {
            let a = self.coeffs.get(i);
            if a.is_zero() {
                continue;
            }
            for j in 0..n {
                let b = other.coeffs.get(j);
                if b.is_zero() {
                    continue;
                }
                let k = self.group.mul(i, j);
                out.set(k, out.get(k) + a * b);
            }
        }
        Ok(GroupRingElement { group: self.group.clone(), coeffs: out })
    }
}

/// The n x n matrix with (i, j) entry equal to the coefficient of v at
/// `g_i^{-1} g_j`.
pub fn sigma(v: &GroupRingElement) -> Vec<Gf4Vector> {
    let g = v.group();
    let n = g.order();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let gi_inv = g.inverse(i);
        let mut row = Gf4Vector::zeros(n);
        for j in 0..n {
            row.set(j, v.coeffs().get(g.mul(gi_inv, j)));
        }
        rows.push(row);
    }
    rows
}

/// Builds the k x k block for a dihedral block group directly from a
/// coefficient row: `[[A, B], [B^T, A^T]]` with A and B the circulants of
/// the first and second halves of the row.
///
/// For the reversibly listed dihedral group of order k this equals the
/// sigma image of the row.
pub fn dihedral_block(row: &Gf4Vector) -> Result<Vec<Gf4Vector>> {
    let k = row.len();
    if k == 0 || !k.is_multiple_of(2) {
        return Err(Error::OddBlockOrder(k));
    }
    let m = k / 2;
    let at = |half: usize, r: usize, c: usize| -> Gf4 {
        // Row r of circ(x_0..x_{m-1}) holds x_{(c - r) mod m} at column c.
        row.get(half * m + (c + m - r) % m)
    };
    let mut rows = Vec::with_capacity(k);
    for r in 0..k {
        let mut out = Gf4Vector::zeros(k);
        for c in 0..k {
            let val = match (r < m, c < m) {
                (true, true) => at(0, r, c),           // A
                (true, false) => at(1, r, c - m),      // B
                (false, true) => at(1, c, r - m),      // B^T
                (false, false) => at(0, c - m, r - m), // A^T
            };
            out.set(c, val);
        }
        rows.push(out);
    }
    Ok(rows)
}

/// Coefficient rows for each element of a reversibly listed outer group;
/// row i holds the block-group coefficients of the element attached to
/// `g_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientGrid {
    outer: ReversibleListing,
    block: ReversibleListing,
    rows: Vec<Gf4Vector>,
}

impl CoefficientGrid {
    pub fn new(
        outer: ReversibleListing,
        block: ReversibleListing,
        rows: Vec<Gf4Vector>,
    ) -> Result<CoefficientGrid> {
        if rows.len() != outer.order() {
            return Err(Error::LengthMismatch { left: rows.len(), right: outer.order() });
        }
        for row in &rows {
            if row.len() != block.order() {
                return Err(Error::LengthMismatch { left: row.len(), right: block.order() });
            }
        }
        Ok(CoefficientGrid { outer, block, rows })
    }

    pub fn outer(&self) -> &ReversibleListing {
        &self.outer
    }

    pub fn block(&self) -> &ReversibleListing {
        &self.block
    }

    pub fn rows(&self) -> &[Gf4Vector] {
        &self.rows
    }

    pub fn n(&self) -> usize {
        self.outer.order()
    }

    pub fn k(&self) -> usize {
        self.block.order()
    }

    pub fn get(&self, row: usize, col: usize) -> Gf4 {
        self.rows[row].get(col)
    }

    pub fn set(&mut self, row: usize, col: usize, x: Gf4) {
        self.rows[row].set(col, x);
    }

    /// Grid text format: a header line `n k`, then n rows of k symbols.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.k());
        for row in &self.rows {
            out.push_str(&row.to_string());
            out.push('\n');
        }
        out
    }
}

/// Parses the grid text format, returning the declared dimensions and the
/// coefficient rows; group listings are supplied by the caller.
pub fn parse_grid_text(text: &str) -> Result<(usize, usize, Vec<Gf4Vector>)> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (ln, header) =
        lines.next().ok_or(Error::Parse { line: 1, msg: "empty grid file".into() })?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    if dims.len() != 2 {
        return Err(Error::Parse { line: ln + 1, msg: "expected header `n k`".into() });
    }
    let n: usize = dims[0]
        .parse()
        .map_err(|_| Error::Parse { line: ln + 1, msg: "bad n in header".into() })?;
    let k: usize = dims[1]
        .parse()
        .map_err(|_| Error::Parse { line: ln + 1, msg: "bad k in header".into() })?;
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let (ln, line) = lines
            .next()
            .ok_or(Error::Parse { line: 0, msg: format!("expected {n} grid rows") })?;
        let row = crate::field::parse_vector(line)
            .map_err(|e| Error::Parse { line: ln + 1, msg: e.to_string() })?;
        if row.len() != k {
            return Err(Error::Parse {
                line: ln + 1,
                msg: format!("row has {} symbols, expected {k}", row.len()),
            });
        }
        rows.push(row);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::Parse { line: ln + 1, msg: "trailing content after grid rows".into() });
    }
    Ok((n, k, rows))
}

/// The kn x kn generator matrix with block structure metadata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMatrix {
    rows: Vec<Gf4Vector>,
    n: usize,
    k: usize,
}

impl GeneratorMatrix {
    pub fn rows(&self) -> &[Gf4Vector] {
        &self.rows
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn length(&self) -> usize {
        self.n * self.k
    }

    /// The k x k block at block position (i, j).
    pub fn block(&self, i: usize, j: usize) -> Vec<Gf4Vector> {
        let k = self.k;
        (0..k)
            .map(|r| {
                let mut out = Gf4Vector::zeros(k);
                for c in 0..k {
                    out.set(c, self.rows[i * k + r].get(j * k + c));
                }
                out
            })
            .collect()
    }

    pub fn to_text(&self) -> String {
        crate::field::format_matrix(&self.rows)
    }

    /// Row space of the matrix.
    pub fn reduce(&self) -> LinearCode {
        linalg::reduce(&self.rows, self.length()).expect("rows share the matrix length")
    }
}

/// Assembles the block generator: block (i, j) is the sigma image of the
/// grid row attached to `g_i^{-1} g_j`.
pub fn build_generator(grid: &CoefficientGrid) -> GeneratorMatrix {
    let outer = grid.outer().group();
    let n = grid.n();
    let k = grid.k();
    let block_group = grid.block().group();

    // Sigma image of each grid row, computed once.
    let blocks: Vec<Vec<Gf4Vector>> = grid
        .rows()
        .iter()
        .map(|row| {
            let v = GroupRingElement::new(block_group.clone(), row.clone())
                .expect("grid row length equals block order");
            sigma(&v)
        })
        .collect();

    let mut rows = vec![Gf4Vector::zeros(n * k); n * k];
    for i in 0..n {
        let gi_inv = outer.inverse(i);
        for j in 0..n {
            let b = outer.mul(gi_inv, j);
            for r in 0..k {
                let src = &blocks[b][r];
                let dst = &mut rows[i * k + r];
                for c in 0..k {
                    dst.set(j * k + c, src.get(c));
                }
            }
        }
    }
    GeneratorMatrix { rows, n, k }
}

/// True when the reverse of every generator row lies in the row space.
pub fn check_row_reversibility(gm: &GeneratorMatrix, code: &LinearCode) -> bool {
    gm.rows().iter().all(|row| {
        linalg::contains(code, &row.reversed()).expect("basis and rows share the length")
    })
}

/// True when, for every block-row, the tuple with blocks in reversed order
/// (each block unchanged) stays inside the row space.
///
/// Membership of a block tuple in the left matrix-ring span of the
/// block-rows is equivalent to scalar row-space membership of each of its
/// k scalar rows, so the check runs on the reduced scalar code.
pub fn check_block_reversibility(gm: &GeneratorMatrix) -> bool {
    let code = gm.reduce();
    let (n, k) = (gm.n(), gm.k());
    for i in 0..n {
        for r in 0..k {
            let src = &gm.rows()[i * k + r];
            let mut w = Gf4Vector::zeros(n * k);
            for j in 0..n {
                for c in 0..k {
                    w.set(j * k + c, src.get((n - 1 - j) * k + c));
                }
            }
            if !linalg::contains(&code, &w).expect("same length") {
                return false;
            }
        }
    }
    true
}

/// Outcome of the coordinate-block translation checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockActionInvariance {
    /// Blocks permuted by `i -> index(g_i * g)`.
    pub right: bool,
    /// Blocks permuted by `i -> index(g * g_i)`.
    pub left: bool,
}

fn invariant_under(gm: &GeneratorMatrix, code: &LinearCode, perm: &[usize]) -> bool {
    let (n, k) = (gm.n(), gm.k());
    code.basis().iter().all(|v| {
        let mut w = Gf4Vector::zeros(n * k);
        for j in 0..n {
            for c in 0..k {
                w.set(perm[j] * k + c, v.get(j * k + c));
            }
        }
        linalg::contains(code, &w).expect("same length")
    })
}

/// True when right-translating the n coordinate blocks by `g` maps the row
/// space onto itself: block i moves to block `index(g_i * g)`.
///
/// Use [`group_action_invariance_both`] to inspect the left action as
/// well; the two can differ on nonabelian outer groups, and only the left
/// action is guaranteed by the construction.
pub fn group_action_invariance(
    gm: &GeneratorMatrix,
    code: &LinearCode,
    outer: &GroupSpec,
    g: usize,
) -> bool {
    let perm: Vec<usize> = (0..gm.n()).map(|i| outer.mul(i, g)).collect();
    invariant_under(gm, code, &perm)
}

/// Right- and left-translation invariance of the coordinate blocks.
pub fn group_action_invariance_both(
    gm: &GeneratorMatrix,
    code: &LinearCode,
    outer: &GroupSpec,
    g: usize,
) -> BlockActionInvariance {
    let right: Vec<usize> = (0..gm.n()).map(|i| outer.mul(i, g)).collect();
    let left: Vec<usize> = (0..gm.n()).map(|i| outer.mul(g, i)).collect();
    BlockActionInvariance {
        right: invariant_under(gm, code, &right),
        left: invariant_under(gm, code, &left),
    }
}
