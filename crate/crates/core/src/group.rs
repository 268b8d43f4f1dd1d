//! Finite groups as explicit Cayley tables with a fixed element listing.
//!
//! Every matrix construction in this crate indexes rows and columns by
//! listing position, so the listing order is part of the data. The key
//! listing is the reversible one: for a group of order n = 2l with an
//! index-2 subgroup H = {e, h1, ..., h_{l-1}} and an involution b outside H,
//! the order
//!
//! ```text
//! e, h1, ..., h_{l-1}, b h_{l-1}, ..., b h1, b
//! ```
//!
//! makes position reversal equal left translation by b. Dihedral groups
//! D_{2p} with H the rotation subgroup are the stock supply of such
//! listings; arbitrary Cayley tables can be loaded from files.

use crate::{Error, Result};

/// A finite group given by its Cayley table and a fixed element listing.
///
/// Element ids are listing positions `0..n`. `table[i][j]` is the position
/// of `g_i * g_j`. Construction checks shape only; run [`validate_group`]
/// to check the group axioms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    labels: Vec<String>,
    inverses: Vec<Option<usize>>,
}

impl GroupSpec {
    /// Builds a group from an n x n table of listing positions.
    ///
    /// Rejects empty or ragged tables and out-of-range entries, but does
    /// not check the group axioms; invalid tables are representable so
    /// that [`validate_group`] has something to report on.
    pub fn new(table: Vec<Vec<usize>>, identity: usize, labels: Option<Vec<String>>) -> Result<GroupSpec> {
        let order = table.len();
        if order == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if identity >= order {
            return Err(Error::InvalidGroup(format!(
                "identity index {identity} out of range for order {order}"
            )));
        }
        let mut flat = Vec::with_capacity(order * order);
        for (i, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(Error::InvalidGroup(format!(
                    "row {i} has {} entries, expected {order}",
                    row.len()
                )));
            }
            for &x in row {
                if x >= order {
                    return Err(Error::InvalidGroup(format!("entry {x} out of range in row {i}")));
                }
                flat.push(x);
            }
        }
        let labels = match labels {
            Some(l) if l.len() == order => l,
            Some(_) => return Err(Error::InvalidGroup("label count differs from order".into())),
            None => (0..order).map(|i| format!("g{i}")).collect(),
        };
        let mut g = GroupSpec { order, table: flat, identity, labels, inverses: vec![None; order] };
        for i in 0..order {
            g.inverses[i] = (0..order).find(|&j| g.mul(i, j) == identity && g.mul(j, i) == identity);
        }
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.table[i * self.order + j]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    /// Position of the inverse of `g_i`.
    ///
    /// Panics when the table has no two-sided inverse for `g_i`; validated
    /// groups always have one.
    pub fn inverse(&self, i: usize) -> usize {
        self.inverses[i].expect("element has no two-sided inverse; validate the group first")
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Parses the group file format: line 1 is n, then n rows of the Cayley
    /// table, then one line holding the identity index.
    pub fn parse(text: &str) -> Result<GroupSpec> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (ln, first) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty group file".into() })?;
        let order: usize = first
            .trim()
            .parse()
            .map_err(|_| Error::Parse { line: ln + 1, msg: "expected the group order".into() })?;
        let mut table = Vec::with_capacity(order);
        for _ in 0..order {
            let (ln, row_text) = lines
                .next()
                .ok_or(Error::Parse { line: 0, msg: "missing Cayley table row".into() })?;
            let row: std::result::Result<Vec<usize>, _> =
                row_text.split_whitespace().map(str::parse).collect();
            let row = row.map_err(|_| Error::Parse { line: ln + 1, msg: "bad table entry".into() })?;
            table.push(row);
        }
        let (ln, id_text) =
            lines.next().ok_or(Error::Parse { line: 0, msg: "missing identity index".into() })?;
        let identity: usize = id_text
            .trim()
            .parse()
            .map_err(|_| Error::Parse { line: ln + 1, msg: "bad identity index".into() })?;
        let group = GroupSpec::new(table, identity, None)?;
        let report = validate_group(&group);
        if !report.is_valid() {
            return Err(Error::InvalidGroup(report.problems.join("; ")));
        }
        Ok(group)
    }

    /// Serializes in the same format accepted by [`GroupSpec::parse`].
    pub fn to_file_string(&self) -> String {
        let mut out = format!("{}\n", self.order);
        for i in 0..self.order {
            let row: Vec<String> = (0..self.order).map(|j| self.mul(i, j).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out.push_str(&format!("{}\n", self.identity));
        out
    }
}

/// Outcome of the structural group checks.
#[derive(Clone, Debug)]
pub struct GroupValidation {
    pub latin_square: bool,
    pub identity_ok: bool,
    pub inverses_ok: bool,
    /// `None` when the order exceeds the exhaustive-check bound (64).
    pub associative: Option<bool>,
    pub problems: Vec<String>,
}

impl GroupValidation {
    pub fn is_valid(&self) -> bool {
        self.latin_square
            && self.identity_ok
            && self.inverses_ok
            && self.associative.unwrap_or(true)
    }
}

/// Checks the Latin-square property, identity, inverses, and (for order
/// at most 64) associativity. Failures are reported, never raised.
pub fn validate_group(g: &GroupSpec) -> GroupValidation {
    let n = g.order();
    let mut problems = Vec::new();

    let mut latin_square = true;
    for i in 0..n {
        let mut seen_row = vec![false; n];
        let mut seen_col = vec![false; n];
        for j in 0..n {
            let r = g.mul(i, j);
            let c = g.mul(j, i);
            if std::mem::replace(&mut seen_row[r], true) {
                latin_square = false;
                problems.push(format!("row {i} repeats element {r}"));
            }
            if std::mem::replace(&mut seen_col[c], true) {
                latin_square = false;
                problems.push(format!("column {i} repeats element {c}"));
            }
        }
    }

    let e = g.identity();
    let identity_ok = (0..n).all(|i| g.mul(e, i) == i && g.mul(i, e) == i);
    if !identity_ok {
        problems.push(format!("element {e} is not a two-sided identity"));
    }

    let inverses_ok = g.inverses.iter().all(Option::is_some);
    if !inverses_ok {
        problems.push("some element has no two-sided inverse".into());
    }

    let associative = if n <= 64 {
        let mut ok = true;
        'outer: for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)) {
                        ok = false;
                        problems.push(format!("associativity fails at ({a}, {b}, {c})"));
                        break 'outer;
                    }
                }
            }
        }
        Some(ok)
    } else {
        None
    };

    GroupValidation { latin_square, identity_ok, inverses_ok, associative, problems }
}

/// The dihedral group D_{2p} of order 2p, listed as
/// `e, a, ..., a^{p-1}, b a^{p-1}, ..., b a, b`.
///
/// The presentation is `a^p = b^2 = e`, `a b a = b`.
pub fn dihedral_listed(p: usize) -> Result<GroupSpec> {
    if p == 0 {
        return Err(Error::InvalidParameter("dihedral parameter p must be positive".into()));
    }
    let n = 2 * p;
    // Element (s, t) stands for b^s a^t.
    let pos = |s: usize, t: usize| -> usize { if s == 0 { t } else { p + (p - 1 - t) } };
    let elem = |i: usize| -> (usize, usize) { if i < p { (0, i) } else { (1, p - 1 - (i - p)) } };
    let mut table = vec![vec![0usize; n]; n];
    for i in 0..n {
        let (s1, t1) = elem(i);
        for j in 0..n {
            let (s2, t2) = elem(j);
            // a^t b = b a^{-t}, so b^s1 a^t1 * b^s2 a^t2 folds to the forms below.
            let prod = if s2 == 0 {
                (s1, (t1 + t2) % p)
            } else {
                ((s1 + 1) % 2, (t2 + p - t1) % p)
            };
            table[i][j] = pos(prod.0, prod.1);
        }
    }
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let (s, t) = elem(i);
        labels.push(match (s, t) {
            (0, 0) => "e".to_string(),
            (0, 1) => "a".to_string(),
            (0, t) => format!("a^{t}"),
            (_, 0) => "b".to_string(),
            (_, 1) => "ba".to_string(),
            (_, t) => format!("ba^{t}"),
        });
    }
    GroupSpec::new(table, 0, Some(labels))
}

/// A group re-listed so that position reversal is left translation by an
/// involution: `g_{n-1-i} = beta * g_i` for all i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReversibleListing {
    group: GroupSpec,
    /// Positions (in the new listing) of the index-2 subgroup: `0..n/2`.
    subgroup: Vec<usize>,
    /// Position of beta in the new listing: `n - 1`.
    beta: usize,
}

impl ReversibleListing {
    /// Re-lists `g` using the index-2 subgroup `subgroup_elems` (positions
    /// in the listing of `g`) and the involution `beta` outside it.
    pub fn new(g: &GroupSpec, subgroup_elems: &[usize], beta: usize) -> Result<ReversibleListing> {
        let n = g.order();
        if !n.is_multiple_of(2) {
            return Err(Error::NotIndexTwoSubgroup(format!("group order {n} is odd")));
        }
        let half = n / 2;
        let mut in_h = vec![false; n];
        for &h in subgroup_elems {
            if h >= n {
                return Err(Error::NotIndexTwoSubgroup(format!("element {h} out of range")));
            }
            if std::mem::replace(&mut in_h[h], true) {
                return Err(Error::NotIndexTwoSubgroup(format!("element {h} listed twice")));
            }
        }
        if subgroup_elems.len() != half {
            return Err(Error::NotIndexTwoSubgroup(format!(
                "subgroup has {} elements, need {half}",
                subgroup_elems.len()
            )));
        }
        if !in_h[g.identity()] {
            return Err(Error::NotIndexTwoSubgroup("subgroup must contain the identity".into()));
        }
        for &h1 in subgroup_elems {
            for &h2 in subgroup_elems {
                if !in_h[g.mul(h1, h2)] {
                    return Err(Error::NotIndexTwoSubgroup(format!(
                        "not closed: {h1} * {h2} falls outside"
                    )));
                }
            }
        }
        if beta >= n {
            return Err(Error::NotIndexTwoSubgroup(format!("beta index {beta} out of range")));
        }
        if in_h[beta] {
            return Err(Error::BetaInSubgroup(beta));
        }
        if g.mul(beta, beta) != g.identity() {
            return Err(Error::BetaNotInvolution(beta));
        }

        // New listing: e, h1, ..., h_{l-1}, beta h_{l-1}, ..., beta h1, beta.
        let mut h_sorted: Vec<usize> =
            subgroup_elems.iter().copied().filter(|&h| h != g.identity()).collect();
        h_sorted.sort_unstable();
        let mut order_old: Vec<usize> = Vec::with_capacity(n);
        order_old.push(g.identity());
        order_old.extend(&h_sorted);
        for &h in h_sorted.iter().rev() {
            order_old.push(g.mul(beta, h));
        }
        order_old.push(beta);

        let mut seen = vec![false; n];
        for &x in &order_old {
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::NotIndexTwoSubgroup(
                    "coset of beta overlaps the subgroup".into(),
                ));
            }
        }

        let mut new_pos = vec![0usize; n];
        for (pos, &old) in order_old.iter().enumerate() {
            new_pos[old] = pos;
        }
        let mut table = vec![vec![0usize; n]; n];
        for i in 0..n {
            for j in 0..n {
                table[i][j] = new_pos[g.mul(order_old[i], order_old[j])];
            }
        }
        let labels: Vec<String> = order_old.iter().map(|&o| g.label(o).to_string()).collect();
        let group = GroupSpec::new(table, 0, Some(labels))?;

        let listing =
            ReversibleListing { group, subgroup: (0..half).collect(), beta: n - 1 };
        debug_assert!(listing.verify());
        Ok(listing)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn subgroup_positions(&self) -> &[usize] {
        &self.subgroup
    }

    pub fn beta_position(&self) -> usize {
        self.beta
    }

    /// Checks `g_{n-1-i} = beta * g_i` for every position.
    pub fn verify(&self) -> bool {
        let n = self.group.order();
        (0..n).all(|i| self.group.mul(self.beta, i) == n - 1 - i)
    }
}

/// [`ReversibleListing::new`] under its operation name.
pub fn build_reversible_listing(
    g: &GroupSpec,
    subgroup_elems: &[usize],
    beta: usize,
) -> Result<ReversibleListing> {
    ReversibleListing::new(g, subgroup_elems, beta)
}

/// D_{2p} with the rotation subgroup and beta = b; already listed
/// reversibly by [`dihedral_listed`], so the re-listing is the identity.
pub fn dihedral_reversible(p: usize) -> Result<ReversibleListing> {
    let g = dihedral_listed(p)?;
    let rotations: Vec<usize> = (0..p).collect();
    ReversibleListing::new(&g, &rotations, 2 * p - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dihedral_order_four_listing() {
        let g = dihedral_listed(2).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.labels(), &["e", "a", "ba", "b"]);
        assert!(validate_group(&g).is_valid());
    }

    #[test]
    fn dihedral_order_six_listing() {
        let g = dihedral_listed(3).unwrap();
        assert_eq!(g.labels(), &["e", "a", "a^2", "ba^2", "ba", "b"]);
        assert!(validate_group(&g).is_valid());
    }

    #[test]
    fn dihedral_relations_hold() {
        for p in 1..=6 {
            let g = dihedral_listed(p).unwrap();
            assert!(validate_group(&g).is_valid());
            let a = if p > 1 { 1 } else { 0 };
            let b = 2 * p - 1;
            // a^p = e
            let mut x = g.identity();
            for _ in 0..p {
                x = g.mul(x, a);
            }
            assert_eq!(x, g.identity());
            // b^2 = e
            assert_eq!(g.mul(b, b), g.identity());
            // a b a = b
            assert_eq!(g.mul(g.mul(a, b), a), b);
        }
        assert!(dihedral_listed(0).is_err());
    }

    #[test]
    fn dihedral_position_reversal_is_left_translation_by_b() {
        for p in 1..=8 {
            let g = dihedral_listed(p).unwrap();
            let n = g.order();
            let b = n - 1;
            for i in 0..n {
                assert_eq!(g.mul(b, i), n - 1 - i);
            }
        }
    }

    #[test]
    fn reversible_listing_on_dihedral_is_stable() {
        for p in [1, 2, 3, 4, 6] {
            let listing = dihedral_reversible(p).unwrap();
            assert!(listing.verify());
            assert_eq!(listing.group().labels(), dihedral_listed(p).unwrap().labels());
            // Each element appears exactly once; positions 0 and n-1 are e and beta.
            assert_eq!(listing.group().identity(), 0);
            assert_eq!(listing.beta_position(), listing.order() - 1);
        }
    }

    #[test]
    fn relisting_d6_from_scrambled_input_matches_the_dihedral_listing() {
        // Scramble D6, then rebuild the reversible listing from H = <a>, beta = b.
        let g = dihedral_listed(3).unwrap();
        let perm = [3usize, 0, 5, 1, 4, 2];
        let mut inv = [0usize; 6];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut table = vec![vec![0usize; 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                table[i][j] = inv[g.mul(perm[i], perm[j])];
            }
        }
        let labels: Vec<String> = perm.iter().map(|&o| g.label(o).to_string()).collect();
        let scrambled = GroupSpec::new(table, inv[0], Some(labels)).unwrap();
        assert!(validate_group(&scrambled).is_valid());

        let subgroup: Vec<usize> = [0usize, 1, 2].iter().map(|&o| inv[o]).collect();
        let listing = ReversibleListing::new(&scrambled, &subgroup, inv[5]).unwrap();
        assert!(listing.verify());
        let names: Vec<&str> = (0..6).map(|i| listing.group().label(i)).collect();
        assert_eq!(names, ["e", "a", "a^2", "ba^2", "ba", "b"]);
    }

    #[test]
    fn rejects_bad_subgroup_or_beta() {
        let g = dihedral_listed(2).unwrap();
        // Wrong size.
        assert!(ReversibleListing::new(&g, &[0], 3).is_err());
        // beta inside H.
        assert!(matches!(
            ReversibleListing::new(&g, &[0, 1], 1),
            Err(Error::BetaInSubgroup(_))
        ));

        // Cyclic C4: the generator is not self-inverse, and neither is g^3,
        // so no reversible listing over H = <g^2> exists at all.
        let c4 = GroupSpec::new(
            (0..4).map(|i| (0..4).map(|j| (i + j) % 4).collect()).collect(),
            0,
            None,
        )
        .unwrap();
        assert!(matches!(
            ReversibleListing::new(&c4, &[0, 2], 1),
            Err(Error::BetaNotInvolution(1))
        ));
        assert!(matches!(
            ReversibleListing::new(&c4, &[0, 2], 3),
            Err(Error::BetaNotInvolution(3))
        ));
    }

    #[test]
    fn validation_reports_failures() {
        assert!(validate_group(&dihedral_listed(2).unwrap()).is_valid());

        // Duplicated row entry breaks the Latin-square property.
        let bad = GroupSpec::new(vec![vec![0, 0], vec![1, 0]], 0, None).unwrap();
        let report = validate_group(&bad);
        assert!(!report.latin_square);
        assert!(!report.is_valid());

        // Wrong identity index.
        let c2 = GroupSpec::new(vec![vec![0, 1], vec![1, 0]], 1, None).unwrap();
        let report = validate_group(&c2);
        assert!(!report.identity_ok);
    }

    #[test]
    fn group_file_roundtrip() {
        let g = dihedral_listed(3).unwrap();
        let text = g.to_file_string();
        let parsed = GroupSpec::parse(&text).unwrap();
        assert_eq!(parsed.order(), 6);
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(parsed.mul(i, j), g.mul(i, j));
            }
        }
        assert!(GroupSpec::parse("2\n0 0\n1 0\n0\n").is_err());
        assert!(GroupSpec::parse("").is_err());
    }
}
