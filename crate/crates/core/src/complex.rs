//! The bigraded chain complex of enhanced states.
//!
//! Generators are enhanced states, graded by (2p, q). The boundary sends
//! a state to a signed sum of states with one positive marker switched to
//! negative; each term lives in (2p - 2, q). Two equivalent boundary
//! rules are implemented:
//!
//! * the tangle rule, which keeps orientations of components away from
//!   the switched crossing, preserves strand directions at the boundary,
//!   and keeps exactly the targets whose total turning drops by one;
//! * the link rule for closed diagrams, which relabels the merged or
//!   split circles through the Frobenius algebra on {1, x}, reading the
//!   label 1 as a counterclockwise circle and x as a clockwise one.
//!
//! The sign of a term is -1 to the number of negative markers at
//! crossings with smaller id than the switched one.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::diagram::TangleDiagram;
use crate::states::{
    enumerate_markers, smooth, BoundaryDir, EdgeId2Comp, KauffmanState, MarkerAssignment,
};
use crate::{EdgeId, Error, Result};

/// Dense integer matrix, row major. Boundary entries are always in
/// {-1, 0, 1}; products stay far below overflow at supported sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn entries(&self) -> &[i64] {
        &self.data
    }

    /// self * rhs.
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Matrix::zero(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..rhs.cols {
                    out.data[r * rhs.cols + c] += a * rhs.get(k, c);
                }
            }
        }
        out
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// The six unit coefficients of the Frobenius rules on labels {1, x}:
/// three merges (the fourth, x with x, is zero) and the three split
/// terms. All +1 in the standard algebra; flipping any single one breaks
/// d^2 = 0 and is used as a negative control.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrobeniusTable {
    pub m11: i64,
    pub m1x: i64,
    pub mx1: i64,
    pub s1_1x: i64,
    pub s1_x1: i64,
    pub sx_xx: i64,
}

/// One coefficient slot of the table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrobeniusRule {
    MergeOneOne,
    MergeOneX,
    MergeXOne,
    SplitOneToOneX,
    SplitOneToXOne,
    SplitXToXX,
}

impl FrobeniusTable {
    pub fn standard() -> Self {
        FrobeniusTable {
            m11: 1,
            m1x: 1,
            mx1: 1,
            s1_1x: 1,
            s1_x1: 1,
            sx_xx: 1,
        }
    }

    /// Standard table with one coefficient negated.
    pub fn with_flipped(rule: FrobeniusRule) -> Self {
        let mut t = Self::standard();
        match rule {
            FrobeniusRule::MergeOneOne => t.m11 = -1,
            FrobeniusRule::MergeOneX => t.m1x = -1,
            FrobeniusRule::MergeXOne => t.mx1 = -1,
            FrobeniusRule::SplitOneToOneX => t.s1_1x = -1,
            FrobeniusRule::SplitOneToXOne => t.s1_x1 = -1,
            FrobeniusRule::SplitXToXX => t.sx_xx = -1,
        }
        t
    }
}

/// One basis element: an enhanced state addressed by marker index and
/// packed orientation bits (component 0 most significant, bit 1 =
/// reversed canonical traversal).
#[derive(Debug, Clone)]
pub struct Generator {
    pub marker_index: usize,
    pub orient_bits: usize,
    pub orientations: Vec<bool>,
    pub p2: i64,
    pub q: i64,
}

/// Boundary maps keyed by source grading: `matrices[(p2, q)]` sends the
/// group at (p2, q) to the group at (p2 - 2, q). Every group has an
/// entry, possibly with zero rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Boundary {
    pub matrices: BTreeMap<(i64, i64), Matrix>,
}

impl Boundary {
    pub fn matrix(&self, p2: i64, q: i64) -> Option<&Matrix> {
        self.matrices.get(&(p2, q))
    }
}

/// All enhanced states of a diagram, bucketed by grading.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    diagram: TangleDiagram,
    states: Vec<KauffmanState>,
    edge2comp: Vec<EdgeId2Comp>,
    generators: Vec<Generator>,
    lookup: HashMap<(usize, usize), usize>,
    groups: BTreeMap<(i64, i64), Vec<usize>>,
    position: Vec<usize>,
}

/// Builds the chain groups of a diagram.
pub fn build_complex(d: &TangleDiagram) -> ChainComplex {
    ChainComplex::new(d)
}

impl ChainComplex {
    pub fn new(d: &TangleDiagram) -> Self {
        let markers = enumerate_markers(d);
        let states: Vec<KauffmanState> = markers.iter().map(|m| smooth(d, m)).collect();
        let edge2comp = states.iter().map(|s| s.edge_to_component(d)).collect();

        let mut generators = Vec::new();
        let mut lookup = HashMap::new();
        let mut groups: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
        for (mi, s) in states.iter().enumerate() {
            for (bits, e) in s.enhance().into_iter().enumerate() {
                let id = generators.len();
                lookup.insert((mi, bits), id);
                groups.entry((e.p.twice(), e.q)).or_default().push(id);
                generators.push(Generator {
                    marker_index: mi,
                    orient_bits: bits,
                    orientations: e.orientations,
                    p2: e.p.twice(),
                    q: e.q,
                });
            }
        }
        let mut position = vec![0; generators.len()];
        for ids in groups.values() {
            for (pos, &id) in ids.iter().enumerate() {
                position[id] = pos;
            }
        }
        ChainComplex {
            diagram: d.clone(),
            states,
            edge2comp,
            generators,
            lookup,
            groups,
            position,
        }
    }

    pub fn diagram(&self) -> &TangleDiagram {
        &self.diagram
    }

    pub fn state(&self, marker_index: usize) -> &KauffmanState {
        &self.states[marker_index]
    }

    pub fn generator(&self, id: usize) -> &Generator {
        &self.generators[id]
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    /// Generator ids per grading, in basis order (ascending marker index,
    /// then ascending orientation bits).
    pub fn groups(&self) -> &BTreeMap<(i64, i64), Vec<usize>> {
        &self.groups
    }

    pub fn group_dim(&self, p2: i64, q: i64) -> usize {
        self.groups.get(&(p2, q)).map_or(0, Vec::len)
    }

    /// Boundary via the orientation rule; defined for open and closed
    /// diagrams alike.
    pub fn boundary_tangle(&self) -> Boundary {
        self.assemble(|sid, c| self.targets_tangle(sid, c))
    }

    /// Boundary via circle relabeling; closed diagrams only.
    pub fn boundary_link(&self, table: &FrobeniusTable) -> Result<Boundary> {
        if !self.diagram.is_closed() {
            return Err(Error::ClosedOnly);
        }
        Ok(self.assemble(|sid, c| self.targets_link(sid, c, table)))
    }

    fn assemble(&self, targets: impl Fn(usize, usize) -> Vec<(usize, i64)>) -> Boundary {
        let mut matrices: BTreeMap<(i64, i64), Matrix> = self
            .groups
            .iter()
            .map(|(&(p2, q), ids)| {
                ((p2, q), Matrix::zero(self.group_dim(p2 - 2, q), ids.len()))
            })
            .collect();
        for (sid, g) in self.generators.iter().enumerate() {
            let marker = &self.states[g.marker_index].markers;
            let m = matrices.get_mut(&(g.p2, g.q)).expect("source group exists");
            for c in marker.positives() {
                let sign = d3_sign(marker, c);
                for (tid, coeff) in targets(sid, c) {
                    let t = &self.generators[tid];
                    assert_eq!(
                        (t.p2, t.q),
                        (g.p2 - 2, g.q),
                        "boundary term must drop 2p by 2 and preserve q"
                    );
                    let (r, col) = (self.position[tid], self.position[sid]);
                    debug_assert_eq!(m.get(r, col), 0, "one term per state pair");
                    m.set(r, col, coeff * sign);
                }
            }
        }
        Boundary { matrices }
    }

    /// Component indices in the given state that meet the four edges at a
    /// crossing.
    fn touched(&self, marker_index: usize, site: &[EdgeId; 4]) -> BTreeSet<usize> {
        site.iter()
            .map(|&e| self.edge2comp[marker_index][e])
            .collect()
    }

    /// Orientations transferred to every target component away from the
    /// switch site. Components there have the same edge set on both sides
    /// because resmoothing only rewires the four site edge ends.
    fn transfer(
        &self,
        src: &Generator,
        t_mi: usize,
        t_touch: &BTreeSet<usize>,
    ) -> Vec<Option<bool>> {
        let t_state = &self.states[t_mi];
        let mut orient = vec![None; t_state.components.len()];
        for (tj, tc) in t_state.components.iter().enumerate() {
            if t_touch.contains(&tj) {
                continue;
            }
            let si = self.edge2comp[src.marker_index][tc.min_edge()];
            debug_assert_eq!(self.states[src.marker_index].components[si].edges, tc.edges);
            orient[tj] = Some(src.orientations[si]);
        }
        orient
    }

    fn targets_tangle(&self, sid: usize, c: usize) -> Vec<(usize, i64)> {
        let src = &self.generators[sid];
        let s_state = &self.states[src.marker_index];
        let t_mi = s_state.markers.with_minus(c).index();
        let t_state = &self.states[t_mi];
        let site = self.diagram.crossing_edges(c);

        let s_touch = self.touched(src.marker_index, &site);
        let t_touch = self.touched(t_mi, &site);
        let base = self.transfer(src, t_mi, &t_touch);
        let src_dirs = touched_dirs(s_state, &src.orientations, &s_touch);

        let slots: Vec<usize> = t_touch.iter().copied().collect();
        let mut out = Vec::new();
        for combo in 0..1usize << slots.len() {
            let mut orient = base.clone();
            for (k, &tj) in slots.iter().enumerate() {
                orient[tj] = Some(combo >> k & 1 == 1);
            }
            let orientations: Vec<bool> =
                orient.iter().map(|o| o.expect("all slots filled")).collect();
            let tau2: i64 = t_state
                .components
                .iter()
                .zip(&orientations)
                .map(|(comp, &rev)| comp.tau2(rev))
                .sum();
            if tau2 != src.p2 - 2 {
                continue;
            }
            if touched_dirs(t_state, &orientations, &t_touch) != src_dirs {
                continue;
            }
            out.push((self.generator_id(t_mi, &orientations), 1));
        }
        out
    }

    fn targets_link(&self, sid: usize, c: usize, table: &FrobeniusTable) -> Vec<(usize, i64)> {
        let src = &self.generators[sid];
        let s_state = &self.states[src.marker_index];
        let t_mi = s_state.markers.with_minus(c).index();
        let site = self.diagram.crossing_edges(c);

        let s_touch: Vec<usize> = self.touched(src.marker_index, &site).into_iter().collect();
        let t_touch: Vec<usize> = self.touched(t_mi, &site).into_iter().collect();
        let base = self.transfer(src, t_mi, &t_touch.iter().copied().collect());

        // Label of a circle: counterclockwise (canonical) is 1, reversed
        // is x. `true` below means x.
        let label = |si: usize| src.orientations[si];
        let mut out = Vec::new();
        let mut push = |bits: &[(usize, bool)], coeff: i64| {
            if coeff == 0 {
                return;
            }
            let mut orient = base.clone();
            for &(tj, x) in bits {
                orient[tj] = Some(x);
            }
            let orientations: Vec<bool> =
                orient.iter().map(|o| o.expect("all slots filled")).collect();
            out.push((self.generator_id(t_mi, &orientations), coeff));
        };

        match (s_touch.len(), t_touch.len()) {
            (2, 1) => {
                // Merge; sources ordered by smallest incident edge.
                let (a, b) = (label(s_touch[0]), label(s_touch[1]));
                let tj = t_touch[0];
                match (a, b) {
                    (false, false) => push(&[(tj, false)], table.m11),
                    (false, true) => push(&[(tj, true)], table.m1x),
                    (true, false) => push(&[(tj, true)], table.mx1),
                    (true, true) => {}
                }
            }
            (1, 2) => {
                // Split; targets ordered by smallest incident edge.
                let (t1, t2) = (t_touch[0], t_touch[1]);
                if label(s_touch[0]) {
                    push(&[(t1, true), (t2, true)], table.sx_xx);
                } else {
                    push(&[(t1, false), (t2, true)], table.s1_1x);
                    push(&[(t1, true), (t2, false)], table.s1_x1);
                }
            }
            (a, b) => unreachable!("closed resmoothing is a merge or split, got {a} -> {b}"),
        }
        out
    }

    fn generator_id(&self, marker_index: usize, orientations: &[bool]) -> usize {
        let n = orientations.len();
        let bits = orientations
            .iter()
            .enumerate()
            .fold(0usize, |acc, (j, &b)| acc | (usize::from(b) << (n - 1 - j)));
        self.lookup[&(marker_index, bits)]
    }
}

/// Checks that consecutive boundary maps compose to zero.
pub fn verify_dsquare(b: &Boundary) -> Result<()> {
    for (&(p2, q), m1) in &b.matrices {
        if let Some(m2) = b.matrices.get(&(p2 - 2, q)) {
            if m1.rows() > 0 && !m2.mul(m1).is_zero() {
                return Err(Error::NotAComplex { p2, q });
            }
        }
    }
    Ok(())
}

/// Sign of the term switching crossing `c`: -1 to the number of negative
/// markers at smaller crossing ids.
fn d3_sign(m: &MarkerAssignment, c: usize) -> i64 {
    if m.negatives().filter(|&n| n < c).count() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Strand directions at the boundary edges of the touched arcs.
fn touched_dirs(
    state: &KauffmanState,
    orientations: &[bool],
    touched: &BTreeSet<usize>,
) -> BTreeMap<EdgeId, BoundaryDir> {
    let mut out = BTreeMap::new();
    for &i in touched {
        if let Some((start, end)) = state.components[i].endpoints {
            let (inw, outw) = if orientations[i] {
                (end, start)
            } else {
                (start, end)
            };
            out.insert(inw, BoundaryDir::Inward);
            out.insert(outw, BoundaryDir::Outward);
        }
    }
    out
}
