//! Integral homology of the boundary, one group per grading.
//!
//! Each boundary matrix is put into Smith normal form over the integers.
//! At grading (p2, q) the group is Z^f plus one finite cyclic summand
//! Z/d for every invariant factor d > 1 of the incoming matrix, with
//!   f = dim C - rank(outgoing) - rank(incoming).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::complex::{verify_dsquare, Boundary, ChainComplex, Matrix};
use crate::ring::{phase, GaussianInt, HalfInt, LaurentPoly};
use crate::Result;

/// Diagonal form of an integer matrix: positive invariant factors, each
/// dividing the next, including any leading 1s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub invariant_factors: Vec<BigInt>,
    pub rank: usize,
    pub rows: usize,
    pub cols: usize,
}

/// Smith normal form by repeated pivoting on the smallest entry.
pub fn smith_normal_form(m: &Matrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|r| (0..cols).map(|c| BigInt::from(m.get(r, c))).collect())
        .collect();

    let mut t = 0;
    'outer: while t < rows.min(cols) {
        // Smallest nonzero entry of the remaining block becomes the pivot.
        let mut piv: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j].is_zero() {
                    continue;
                }
                if piv.is_none_or(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs()) {
                    piv = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = piv else { break };
        a.swap(t, pi);
        for row in &mut a {
            row.swap(t, pj);
        }

        // One Euclidean pass down the column and across the row. Nonzero
        // remainders are strictly smaller than the pivot, so re-picking
        // terminates.
        let mut dirty = false;
        for i in t + 1..rows {
            if a[i][t].is_zero() {
                continue;
            }
            let q = &a[i][t] / &a[t][t];
            if !q.is_zero() {
                let (head, tail) = a.split_at_mut(i);
                for (x, y) in tail[0][t..].iter_mut().zip(&head[t][t..]) {
                    *x -= &q * y;
                }
            }
            dirty |= !a[i][t].is_zero();
        }
        for j in t + 1..cols {
            if a[t][j].is_zero() {
                continue;
            }
            let q = &a[t][j] / &a[t][t];
            if !q.is_zero() {
                for row in a.iter_mut() {
                    let s = &q * &row[t];
                    row[j] -= s;
                }
            }
            dirty |= !a[t][j].is_zero();
        }
        if dirty {
            continue 'outer;
        }

        // Pivot row and column are clear; fold in any entry the pivot
        // does not divide yet.
        for i in t + 1..rows {
            if (t + 1..cols).any(|j| !(&a[i][j] % &a[t][t]).is_zero()) {
                let (head, tail) = a.split_at_mut(i);
                for (x, y) in head[t][t..].iter_mut().zip(&tail[0][t..]) {
                    *x += y;
                }
                continue 'outer;
            }
        }

        if a[t][t].is_negative() {
            for v in a[t][t..].iter_mut() {
                *v = -v.clone();
            }
        }
        t += 1;
    }

    let invariant_factors: Vec<BigInt> = (0..t).map(|k| a[k][k].clone()).collect();
    debug_assert!(invariant_factors
        .windows(2)
        .all(|w| (&w[1] % &w[0]).is_zero()));
    SmithDecomposition {
        invariant_factors,
        rank: t,
        rows,
        cols,
    }
}

/// One homology group: free part and finite cyclic orders > 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Nontrivial homology groups keyed by (2p, q).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BigradedHomology {
    pub groups: BTreeMap<(i64, i64), HomologyGroup>,
}

impl BigradedHomology {
    /// Sum of i^(2p) A^q rank over all groups; equals the bracket.
    pub fn graded_euler(&self) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&(p2, q), g) in &self.groups {
            let coeff = phase(HalfInt::from_twice(p2)) * GaussianInt::new(g.free_rank as i64, 0);
            out.add_term(q, coeff);
        }
        out
    }
}

/// Homology of a verified boundary.
pub fn homology(cx: &ChainComplex, b: &Boundary) -> Result<BigradedHomology> {
    verify_dsquare(b)?;
    let snf: BTreeMap<(i64, i64), SmithDecomposition> = b
        .matrices
        .iter()
        .filter(|(_, m)| m.rows() > 0 && m.cols() > 0)
        .map(|(k, m)| (*k, smith_normal_form(m)))
        .collect();

    let mut groups = BTreeMap::new();
    for (&(p2, q), ids) in cx.groups() {
        let rank_out = snf.get(&(p2, q)).map_or(0, |s| s.rank);
        let incoming = snf.get(&(p2 + 2, q));
        let rank_in = incoming.map_or(0, |s| s.rank);
        let free_rank = ids.len() - rank_out - rank_in;
        let torsion: Vec<BigInt> = incoming.map_or_else(Vec::new, |s| {
            s.invariant_factors
                .iter()
                .filter(|f| **f > BigInt::one())
                .cloned()
                .collect()
        });
        if free_rank > 0 || !torsion.is_empty() {
            groups.insert((p2, q), HomologyGroup { free_rank, torsion });
        }
    }
    Ok(BigradedHomology { groups })
}

/// True when the two homologies agree group by group.
pub fn compare_homology(a: &BigradedHomology, b: &BigradedHomology) -> bool {
    a == b
}
