//! Bracket evaluation by tensor contraction.
//!
//! Every strand segment carries an index in {0, 1}; 1 means the strand
//! is oriented up through that segment and 0 means down. Tiles are
//! weight tensors in those indices:
//!
//! * `xa` carries the matrix R and `xb` its inverse, rows indexed by the
//!   two lower segments and columns by the two upper ones (left segment
//!   first, so row/column order is 00, 01, 10, 11);
//! * `cap` carries the covector n = (0, A, -A^-1, 0) and `cup` the
//!   vector u = (0, -A, A^-1, 0);
//! * `id` is the identity.
//!
//! Contracting all indices of a closed diagram yields its bracket. Both
//! crossing matrices split along the marker choice through the matrix M:
//! R = A I + A^-1 M and R^-1 = A^-1 I + A M, and the per-marker
//! contraction equals the enhanced-state sum over that marker.

use crate::diagram::{TangleDiagram, Tile};
use crate::ring::{phase, GaussianInt, LaurentPoly};
use crate::states::{enumerate_markers, smooth, BoundaryDir, Marker, MarkerAssignment};
use crate::{Error, Result};

type Weights = Vec<Vec<LaurentPoly>>;

fn poly(terms: &[(i64, i64)]) -> LaurentPoly {
    let mut p = LaurentPoly::zero();
    for &(exp, coeff) in terms {
        p.add_term(exp, GaussianInt::new(coeff, 0));
    }
    p
}

/// The standard weight tensors.
#[derive(Debug, Clone)]
pub struct WeightTable {
    /// R, indexed `r[lower][upper]`.
    pub r: Weights,
    /// R^-1.
    pub b: Weights,
    /// Cap covector n.
    pub n: Vec<LaurentPoly>,
    /// Cup vector u.
    pub u: Vec<LaurentPoly>,
    /// M, the turn-back block shared by both crossings.
    pub m: Weights,
}

impl WeightTable {
    pub fn standard() -> Self {
        let z = || poly(&[]);
        let r = vec![
            vec![poly(&[(1, 1)]), z(), z(), z()],
            vec![z(), z(), poly(&[(-1, 1)]), z()],
            vec![z(), poly(&[(-1, 1)]), poly(&[(1, 1), (-3, -1)]), z()],
            vec![z(), z(), z(), poly(&[(1, 1)])],
        ];
        let b = vec![
            vec![poly(&[(-1, 1)]), z(), z(), z()],
            vec![z(), poly(&[(-1, 1), (3, -1)]), poly(&[(1, 1)]), z()],
            vec![z(), poly(&[(1, 1)]), z(), z()],
            vec![z(), z(), z(), poly(&[(-1, 1)])],
        ];
        let m = vec![
            vec![z(), z(), z(), z()],
            vec![z(), poly(&[(2, -1)]), poly(&[(0, 1)]), z()],
            vec![z(), poly(&[(0, 1)]), poly(&[(-2, -1)]), z()],
            vec![z(), z(), z(), z()],
        ];
        let n = vec![z(), poly(&[(1, 1)]), poly(&[(-1, -1)]), z()];
        let u = vec![z(), poly(&[(1, -1)]), poly(&[(-1, 1)]), z()];
        WeightTable { r, b, n, u, m }
    }

    /// Weight matrix of one tile, `[2^in][2^out]`, index words reading
    /// the strands left to right.
    fn tile_weights(&self, tile: Tile) -> Weights {
        match tile {
            Tile::Id => vec![
                vec![LaurentPoly::one(), LaurentPoly::zero()],
                vec![LaurentPoly::zero(), LaurentPoly::one()],
            ],
            Tile::CrossA => self.r.clone(),
            Tile::CrossB => self.b.clone(),
            Tile::Cap => self.n.iter().map(|p| vec![p.clone()]).collect(),
            Tile::Cup => vec![self.u.clone()],
        }
    }

    /// The marker-split crossing weight: the A or A^-1 multiple of I or M
    /// whose sum over both markers rebuilds the full matrix.
    fn marked_crossing(&self, tile: Tile, marker: Marker) -> Weights {
        let identity: Weights = (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| {
                        if i == j {
                            LaurentPoly::one()
                        } else {
                            LaurentPoly::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        let scaled = |w: &Weights, exp: i64| -> Weights {
            w.iter()
                .map(|row| row.iter().map(|p| p * &LaurentPoly::var_pow(exp)).collect())
                .collect()
        };
        match (tile, marker) {
            (Tile::CrossA, Marker::Plus) => scaled(&identity, 1),
            (Tile::CrossA, Marker::Minus) => scaled(&self.m, -1),
            (Tile::CrossB, Marker::Plus) => scaled(&self.m, 1),
            (Tile::CrossB, Marker::Minus) => scaled(&identity, -1),
            _ => unreachable!("not a crossing tile"),
        }
    }
}

/// Checks R R^-1 = I and the split of both crossing matrices through M.
pub fn check_matrix_identities(t: &WeightTable) -> bool {
    let prod_is_identity = (0..4).all(|i| {
        (0..4).all(|k| {
            let mut acc = LaurentPoly::zero();
            for j in 0..4 {
                acc += &(&t.r[i][j] * &t.b[j][k]);
            }
            let expect = if i == k {
                LaurentPoly::one()
            } else {
                LaurentPoly::zero()
            };
            acc == expect
        })
    });
    let split = |full: &Weights, tile: Tile| {
        (0..4).all(|i| {
            (0..4).all(|j| {
                let plus = t.marked_crossing(tile, Marker::Plus);
                let minus = t.marked_crossing(tile, Marker::Minus);
                &plus[i][j] + &minus[i][j] == full[i][j]
            })
        })
    };
    prod_is_identity && split(&t.r, Tile::CrossA) && split(&t.b, Tile::CrossB)
}

/// Contracts the diagram bottom to top. Weight matrices per tile come
/// from the callback; the result maps (bottom word, top word) to the
/// contracted polynomial. Words read strands left to right, leftmost in
/// the highest bit.
fn contract(
    d: &TangleDiagram,
    weight_of: &dyn Fn(&crate::diagram::PlacedTile) -> Weights,
) -> Vec<Vec<LaurentPoly>> {
    let bottom = d.bottom_arity();
    let mut cur = bottom;
    let mut state: Vec<Vec<LaurentPoly>> = (0..1usize << bottom)
        .map(|wb| {
            (0..1usize << bottom)
                .map(|wc| {
                    if wb == wc {
                        LaurentPoly::one()
                    } else {
                        LaurentPoly::zero()
                    }
                })
                .collect()
        })
        .collect();

    let tiles = d.tiles();
    let mut row_start = 0;
    for (row_idx, row) in d.rows().iter().enumerate() {
        let placed = &tiles[row_start..row_start + row.len()];
        row_start += row.len();

        let weights: Vec<Weights> = placed.iter().map(weight_of).collect();
        let out_width: usize = row.iter().map(Tile::out_arity).sum();
        let mut next: Vec<Vec<LaurentPoly>> =
            vec![vec![LaurentPoly::zero(); 1 << out_width]; 1 << bottom];

        for (wb, words) in state.iter().enumerate() {
            for (wc, val) in words.iter().enumerate() {
                if val.is_zero() {
                    continue;
                }
                // Sparse expansion across the row's tiles.
                let mut frontier: Vec<(usize, LaurentPoly)> = vec![(0, val.clone())];
                let mut consumed = 0;
                for (tile, w) in row.iter().zip(&weights) {
                    let (ia, oa) = (tile.in_arity(), tile.out_arity());
                    let in_bits = (wc >> (cur - consumed - ia)) & ((1 << ia) - 1);
                    consumed += ia;
                    let mut grown = Vec::new();
                    for (word, acc) in &frontier {
                        for (out_bits, weight) in w[in_bits].iter().enumerate() {
                            if weight.is_zero() {
                                continue;
                            }
                            grown.push(((word << oa) | out_bits, acc * weight));
                        }
                    }
                    frontier = grown;
                    if frontier.is_empty() {
                        break;
                    }
                }
                for (word, acc) in frontier {
                    next[wb][word] += &acc;
                }
            }
        }
        state = next;
        cur = out_width;
        debug_assert!(row_idx < d.rows().len());
    }
    state
}

/// The bracket of a closed diagram by full tensor contraction.
pub fn bracket_tensor(d: &TangleDiagram) -> Result<LaurentPoly> {
    if !d.is_closed() {
        return Err(Error::ClosedOnly);
    }
    let t = WeightTable::standard();
    let out = contract(d, &|placed| t.tile_weights(placed.tile));
    Ok(out[0][0].clone())
}

/// The one-marker slice of the contraction: crossings contribute their
/// marker term only. Summed over all markers this rebuilds the bracket;
/// each slice equals the enhanced-state sum over the same marker.
pub fn bracket_tensor_marked(d: &TangleDiagram, markers: &MarkerAssignment) -> Result<LaurentPoly> {
    if !d.is_closed() {
        return Err(Error::ClosedOnly);
    }
    assert_eq!(markers.len(), d.crossing_count());
    let t = WeightTable::standard();
    let out = contract(d, &|placed| match placed.crossing {
        Some(occ) => t.marked_crossing(placed.tile, markers.get(d.crossing_id(occ))),
        None => t.tile_weights(placed.tile),
    });
    Ok(out[0][0].clone())
}

/// One boundary-word row of [`open_tensor_report`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorEntry {
    /// Bottom indices, leftmost strand first; 1 means oriented upward.
    pub bottom: String,
    /// Top indices, same convention.
    pub top: String,
    pub tensor: LaurentPoly,
    /// Enhanced-state sum restricted to states inducing these directions.
    pub state_sum: LaurentPoly,
}

/// Side-by-side view of an open diagram: contracted tensor entries next
/// to the direction-filtered state sums. The two columns are reported
/// for inspection; no identity between them is claimed.
pub fn open_tensor_report(d: &TangleDiagram) -> Vec<TensorEntry> {
    let t = WeightTable::standard();
    let tensor = contract(d, &|placed| t.tile_weights(placed.tile));

    let (b, tp) = (d.bottom_arity(), d.top_arity());
    let mut sums: Vec<Vec<LaurentPoly>> =
        vec![vec![LaurentPoly::zero(); 1 << tp]; 1 << b];
    for m in enumerate_markers(d) {
        let state = smooth(d, &m);
        for e in state.enhance() {
            let dirs = state.boundary_directions(&e.orientations);
            let mut wb = 0usize;
            for &edge in d.bottom_edges() {
                let up = dirs[&edge] == BoundaryDir::Inward;
                wb = (wb << 1) | usize::from(up);
            }
            let mut wt = 0usize;
            for &edge in d.top_edges() {
                let up = dirs[&edge] == BoundaryDir::Outward;
                wt = (wt << 1) | usize::from(up);
            }
            sums[wb][wt].add_term(e.q, phase(e.p));
        }
    }

    let word = |w: usize, width: usize| -> String {
        (0..width)
            .map(|k| if w >> (width - 1 - k) & 1 == 1 { '1' } else { '0' })
            .collect()
    };
    let mut out = Vec::new();
    for wb in 0..1usize << b {
        for wt in 0..1usize << tp {
            let te = &tensor[wb][wt];
            let ss = &sums[wb][wt];
            if te.is_zero() && ss.is_zero() {
                continue;
            }
            out.push(TensorEntry {
                bottom: word(wb, b),
                top: word(wt, tp),
                tensor: te.clone(),
                state_sum: ss.clone(),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statesum::bracket_state_sum;

    fn parse(text: &str) -> TangleDiagram {
        TangleDiagram::parse(text).unwrap()
    }

    #[test]
    fn frozen_weight_entries() {
        let t = WeightTable::standard();
        assert_eq!(t.r[0][0], "A".parse().unwrap());
        assert_eq!(t.r[1][2], "A^-1".parse().unwrap());
        assert_eq!(t.r[2][1], "A^-1".parse().unwrap());
        assert_eq!(t.r[2][2], "A - A^-3".parse().unwrap());
        assert_eq!(t.r[3][3], "A".parse().unwrap());
        assert_eq!(t.b[1][1], "A^-1 - A^3".parse().unwrap());
        assert_eq!(t.b[1][2], "A".parse().unwrap());
        assert_eq!(t.b[2][2], LaurentPoly::zero());
        assert_eq!(t.n[1], "A".parse().unwrap());
        assert_eq!(t.n[2], "-A^-1".parse().unwrap());
        assert_eq!(t.u[1], "-A".parse().unwrap());
        assert_eq!(t.u[2], "A^-1".parse().unwrap());
        let zeros = [(0usize, 1usize), (0, 2), (1, 0), (1, 1), (2, 0), (3, 1)];
        for (i, j) in zeros {
            assert_eq!(t.r[i][j], LaurentPoly::zero());
        }
    }

    #[test]
    fn crossing_identities_hold() {
        assert!(check_matrix_identities(&WeightTable::standard()));
    }

    #[test]
    fn corrupting_a_weight_breaks_the_identities() {
        let mut t = WeightTable::standard();
        t.r[2][2] = "A".parse().unwrap();
        assert!(!check_matrix_identities(&t));
    }

    #[test]
    fn snake_bends_straighten() {
        // Cap following cup on an adjacent strand is a vertical strand:
        // sum over the middle index of n and u weights is the identity.
        let t = WeightTable::standard();
        for i in 0..2 {
            for k in 0..2 {
                let mut right = LaurentPoly::zero();
                let mut left = LaurentPoly::zero();
                for j in 0..2 {
                    right += &(&t.n[(i << 1) | j] * &t.u[(j << 1) | k]);
                    left += &(&t.n[(j << 1) | i] * &t.u[(k << 1) | j]);
                }
                let expect = if i == k {
                    LaurentPoly::one()
                } else {
                    LaurentPoly::zero()
                };
                assert_eq!(right, expect);
                assert_eq!(left, expect);
            }
        }
    }

    #[test]
    fn circle_contracts_to_the_loop_value() {
        let mut acc = LaurentPoly::zero();
        let t = WeightTable::standard();
        for w in 0..4 {
            acc += &(&t.u[w] * &t.n[w]);
        }
        assert_eq!(acc, crate::statesum::loop_value());
    }

    #[test]
    fn tensor_bracket_matches_state_sum_on_closed_diagrams() {
        for text in [
            "cup\ncap",
            "cup\nxa\ncap",
            "cup\nxb\ncap",
            "cup\nxa\nxb\ncap",
            "cup\nid cup id\nxa id id\nxa id id\nid cap id\ncap",
            "cup\nid cup id\nxa id id\nxa id id\nxa id id\nid cap id\ncap",
        ] {
            let d = parse(text);
            assert_eq!(
                bracket_tensor(&d).unwrap(),
                bracket_state_sum(&d).value,
                "{text}"
            );
        }
    }

    #[test]
    fn marked_slices_match_per_marker_state_sums() {
        for text in ["cup\nxa\ncap", "cup\nid cup id\nxa id id\nxb id id\nid cap id\ncap"] {
            let d = parse(text);
            let mut total = LaurentPoly::zero();
            for m in enumerate_markers(&d) {
                let slice = bracket_tensor_marked(&d, &m).unwrap();
                let mut direct = LaurentPoly::zero();
                for e in smooth(&d, &m).enhance() {
                    direct.add_term(e.q, phase(e.p));
                }
                assert_eq!(slice, direct, "{text} marker {m}");
                total += &slice;
            }
            assert_eq!(total, bracket_tensor(&d).unwrap(), "{text}");
        }
    }

    #[test]
    fn open_diagrams_are_rejected() {
        assert_eq!(bracket_tensor(&parse("xa")), Err(Error::ClosedOnly));
        let m = MarkerAssignment::from_index(1, 0);
        assert_eq!(bracket_tensor_marked(&parse("xa"), &m), Err(Error::ClosedOnly));
    }

    /// Independent contraction: assign 0/1 to every edge and sum products
    /// of tile weights over all assignments.
    fn brute_force_contraction(d: &TangleDiagram) -> LaurentPoly {
        let t = WeightTable::standard();
        let weights: Vec<Weights> = d
            .tiles()
            .iter()
            .map(|p| t.tile_weights(p.tile))
            .collect();
        let edges = d.edge_count();
        assert!(edges <= 16, "oracle is exponential in edges");
        let mut total = LaurentPoly::zero();
        'assign: for mask in 0..1usize << edges {
            let mut prod = LaurentPoly::one();
            for (p, w) in d.tiles().iter().zip(&weights) {
                let mut wi = 0usize;
                for &e in &p.inputs {
                    wi = (wi << 1) | (mask >> e & 1);
                }
                let mut wo = 0usize;
                for &e in &p.outputs {
                    wo = (wo << 1) | (mask >> e & 1);
                }
                let entry = &w[wi][wo];
                if entry.is_zero() {
                    continue 'assign;
                }
                prod = prod * entry.clone();
            }
            total += &prod;
        }
        total
    }

    #[test]
    fn folding_matches_brute_force_contraction() {
        for text in [
            "cup\ncap",
            "cup\nxa\ncap",
            "cup\nxb\ncap",
            "cup\nxa\nxb\ncap",
            "cup\nid cup id\nxa id id\nxa id id\nid cap id\ncap",
        ] {
            let d = parse(text);
            assert_eq!(
                bracket_tensor(&d).unwrap(),
                brute_force_contraction(&d),
                "{text}"
            );
        }
    }

    #[test]
    fn open_report_for_a_strand_is_diagonal() {
        let entries = open_tensor_report(&parse("id"));
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[0].bottom, "0");
        assert_eq!(entries[0].top, "0");
        assert_eq!(entries[0].tensor, LaurentPoly::one());
        assert_eq!(entries[0].state_sum, LaurentPoly::one());
        assert_eq!(entries[1].bottom, "1");
        assert_eq!(entries[1].top, "1");
    }

    #[test]
    fn open_report_for_a_cap_lists_both_passes() {
        let entries = open_tensor_report(&parse("cap"));
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[0].bottom, "01");
        assert_eq!(entries[0].tensor, "A".parse().unwrap());
        assert_eq!(entries[0].state_sum, "i*A^-1".parse().unwrap());
        assert_eq!(entries[1].bottom, "10");
        assert_eq!(entries[1].tensor, "-A^-1".parse().unwrap());
        assert_eq!(entries[1].state_sum, "-i*A".parse().unwrap());
    }
}
