//! Kauffman states: marker assignments, smoothing, and enhanced states.
//!
//! A marker turns each crossing into one of its two smoothings: `xa` with
//! a positive marker (and `xb` with a negative one) becomes two vertical
//! strands; the other choice becomes a turn-back, a cap below a cup.
//! After smoothing, the diagram is a disjoint union of circles and arcs.
//!
//! Orienting every component makes a state enhanced. The grading data is
//!   sigma = sum of marker signs,
//!   tau   = sum of component turning numbers,
//! where turning is counted only at caps and cups: a cup traversed left
//! to right and a cap traversed right to left each add +1/2, and the
//! reversed passes add -1/2. A counterclockwise circle thus has turning
//! +1 and a clockwise one -1; arcs can end on half-integers. The bracket
//! exponents are p = tau and q = sigma - 2*tau.

use std::collections::BTreeMap;
use std::fmt;

use crate::diagram::{EdgeId, TangleDiagram, Tile};
use crate::ring::HalfInt;

/// Marker sign at one crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Marker {
    Plus,
    Minus,
}

impl Marker {
    pub fn sign(&self) -> i64 {
        match self {
            Marker::Plus => 1,
            Marker::Minus => -1,
        }
    }
}

impl fmt::Display for Marker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if *self == Marker::Plus { '+' } else { '-' })
    }
}

/// One marker per crossing, indexed by crossing id.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MarkerAssignment {
    signs: Vec<Marker>,
}

impl MarkerAssignment {
    pub fn new(signs: Vec<Marker>) -> Self {
        MarkerAssignment { signs }
    }

    /// The assignment at the given lexicographic index (`Plus < Minus`,
    /// crossing 0 most significant).
    pub fn from_index(crossings: usize, index: usize) -> Self {
        assert!(crossings < usize::BITS as usize);
        assert!(index < 1 << crossings);
        let signs = (0..crossings)
            .map(|c| {
                if index >> (crossings - 1 - c) & 1 == 1 {
                    Marker::Minus
                } else {
                    Marker::Plus
                }
            })
            .collect();
        MarkerAssignment { signs }
    }

    pub fn index(&self) -> usize {
        self.signs.iter().fold(0, |acc, m| {
            (acc << 1) | usize::from(*m == Marker::Minus)
        })
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn get(&self, crossing: usize) -> Marker {
        self.signs[crossing]
    }

    pub fn signs(&self) -> &[Marker] {
        &self.signs
    }

    /// Sum of marker signs.
    pub fn sigma(&self) -> i64 {
        self.signs.iter().map(Marker::sign).sum()
    }

    /// Copy with one crossing switched to a negative marker.
    pub fn with_minus(&self, crossing: usize) -> Self {
        let mut signs = self.signs.clone();
        signs[crossing] = Marker::Minus;
        MarkerAssignment { signs }
    }

    /// Crossing ids carrying a positive marker.
    pub fn positives(&self) -> impl Iterator<Item = usize> + '_ {
        self.signs
            .iter()
            .enumerate()
            .filter(|(_, m)| **m == Marker::Plus)
            .map(|(c, _)| c)
    }

    /// Crossing ids carrying a negative marker, ascending.
    pub fn negatives(&self) -> impl Iterator<Item = usize> + '_ {
        self.signs
            .iter()
            .enumerate()
            .filter(|(_, m)| **m == Marker::Minus)
            .map(|(c, _)| c)
    }
}

impl fmt::Display for MarkerAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.signs {
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// All `2^n` marker assignments in lexicographic order.
pub fn enumerate_markers(d: &TangleDiagram) -> Vec<MarkerAssignment> {
    let n = d.crossing_count();
    (0..1usize << n)
        .map(|i| MarkerAssignment::from_index(n, i))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentKind {
    Circle,
    Arc,
}

/// Where a turn happened and whether the canonical traversal takes it
/// counterclockwise (+1/2) or clockwise (-1/2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TurnEvent {
    pub kind: TurnKind,
    pub ccw: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TurnKind {
    Cap,
    Cup,
}

/// A connected component of a smoothed diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub kind: ComponentKind,
    /// Incident edges, ascending.
    pub edges: Vec<EdgeId>,
    /// Turns in canonical traversal order.
    pub events: Vec<TurnEvent>,
    /// For arcs: boundary edges (traversal start, traversal end) of the
    /// canonical orientation.
    pub endpoints: Option<(EdgeId, EdgeId)>,
    tau2_canon: i64,
}

impl Component {
    pub fn min_edge(&self) -> EdgeId {
        self.edges[0]
    }

    /// Twice the turning number under the given orientation
    /// (`reversed = false` is the canonical traversal).
    pub fn tau2(&self, reversed: bool) -> i64 {
        if reversed {
            -self.tau2_canon
        } else {
            self.tau2_canon
        }
    }
}

/// Turning number of a component as an exact half-integer.
pub fn component_tau(c: &Component, reversed: bool) -> HalfInt {
    HalfInt::from_twice(c.tau2(reversed))
}

/// Strand direction at a boundary edge induced by an arc orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryDir {
    /// The strand points from the boundary into the diagram.
    Inward,
    /// The strand points out of the diagram.
    Outward,
}

/// Component index of every edge, indexed by edge id.
pub type EdgeId2Comp = Vec<usize>;

/// A smoothed diagram: markers plus the resulting components, ordered by
/// smallest incident edge.
#[derive(Debug, Clone)]
pub struct KauffmanState {
    pub markers: MarkerAssignment,
    pub components: Vec<Component>,
}

impl KauffmanState {
    pub fn edge_to_component(&self, d: &TangleDiagram) -> EdgeId2Comp {
        let mut map = vec![usize::MAX; d.edge_count()];
        for (ci, c) in self.components.iter().enumerate() {
            for &e in &c.edges {
                map[e] = ci;
            }
        }
        map
    }

    pub fn circle_count(&self) -> usize {
        self.components
            .iter()
            .filter(|c| c.kind == ComponentKind::Circle)
            .count()
    }

    /// All `2^components` enhanced states in lexicographic orientation
    /// order (component 0 most significant, canonical before reversed).
    pub fn enhance(&self) -> Vec<EnhancedState> {
        let n = self.components.len();
        assert!(n < usize::BITS as usize);
        let sigma = self.markers.sigma();
        (0..1usize << n)
            .map(|bits| {
                let orientations: Vec<bool> = (0..n)
                    .map(|c| bits >> (n - 1 - c) & 1 == 1)
                    .collect();
                EnhancedState::new(self, sigma, orientations)
            })
            .collect()
    }

    /// Strand directions induced on the boundary edges by the given
    /// orientations (one bool per component, `true` = reversed).
    pub fn boundary_directions(&self, orientations: &[bool]) -> BTreeMap<EdgeId, BoundaryDir> {
        assert_eq!(orientations.len(), self.components.len());
        let mut out = BTreeMap::new();
        for (c, rev) in self.components.iter().zip(orientations) {
            if let Some((start, end)) = c.endpoints {
                let (inward, outward) = if *rev { (end, start) } else { (start, end) };
                out.insert(inward, BoundaryDir::Inward);
                out.insert(outward, BoundaryDir::Outward);
            }
        }
        out
    }
}

/// A Kauffman state with every component oriented, and the grading data
/// cached: p = tau and q = sigma - 2*tau.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnhancedState {
    /// One flag per component, `true` = reversed canonical traversal.
    pub orientations: Vec<bool>,
    pub sigma: i64,
    pub tau: HalfInt,
    pub p: HalfInt,
    pub q: i64,
}

impl EnhancedState {
    fn new(state: &KauffmanState, sigma: i64, orientations: Vec<bool>) -> Self {
        let tau2: i64 = state
            .components
            .iter()
            .zip(&orientations)
            .map(|(c, &rev)| c.tau2(rev))
            .sum();
        let tau = HalfInt::from_twice(tau2);
        EnhancedState {
            orientations,
            sigma,
            tau,
            p: tau,
            q: sigma - tau2,
        }
    }
}

/// Which end of an edge a connection attaches to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum End {
    Lower = 0,
    Upper = 1,
}

/// Half of a tile connection: the other edge end, plus the turn taken
/// when traversing toward it.
#[derive(Debug, Clone, Copy)]
struct Peer {
    edge: EdgeId,
    end: End,
    turn: Option<TurnEvent>,
}

/// Apply the markers and compute the components of the smoothed diagram.
pub fn smooth(d: &TangleDiagram, markers: &MarkerAssignment) -> KauffmanState {
    assert_eq!(markers.len(), d.crossing_count());
    smooth_traced(d, markers, &|e| e)
}

/// As `smooth`, but trace starting points are chosen by the given edge
/// priority instead of raw edge ids. The enhanced-state multiset must not
/// depend on this; tests exercise it.
fn smooth_traced(
    d: &TangleDiagram,
    markers: &MarkerAssignment,
    priority: &dyn Fn(EdgeId) -> usize,
) -> KauffmanState {
    let mut ends: Vec<[Option<Peer>; 2]> = vec![[None, None]; d.edge_count()];
    let mut connect = |a: (EdgeId, End), b: (EdgeId, End), turn_ab: Option<TurnEvent>| {
        let turn_ba = turn_ab.map(|t| TurnEvent {
            kind: t.kind,
            ccw: !t.ccw,
        });
        ends[a.0][a.1 as usize] = Some(Peer {
            edge: b.0,
            end: b.1,
            turn: turn_ab,
        });
        ends[b.0][b.1 as usize] = Some(Peer {
            edge: a.0,
            end: a.1,
            turn: turn_ba,
        });
    };
    let cap = |left_to_right: bool| {
        Some(TurnEvent {
            kind: TurnKind::Cap,
            ccw: !left_to_right,
        })
    };
    let cup = |left_to_right: bool| {
        Some(TurnEvent {
            kind: TurnKind::Cup,
            ccw: left_to_right,
        })
    };

    for t in d.tiles() {
        match t.tile {
            Tile::Id => connect((t.inputs[0], End::Upper), (t.outputs[0], End::Lower), None),
            Tile::Cap => connect((t.inputs[0], End::Upper), (t.inputs[1], End::Upper), cap(true)),
            Tile::Cup => connect(
                (t.outputs[0], End::Lower),
                (t.outputs[1], End::Lower),
                cup(true),
            ),
            Tile::CrossA | Tile::CrossB => {
                let id = d.crossing_id(t.crossing.expect("crossing tile indexed"));
                let vertical = matches!(
                    (t.tile, markers.get(id)),
                    (Tile::CrossA, Marker::Plus) | (Tile::CrossB, Marker::Minus)
                );
                if vertical {
                    connect((t.inputs[0], End::Upper), (t.outputs[0], End::Lower), None);
                    connect((t.inputs[1], End::Upper), (t.outputs[1], End::Lower), None);
                } else {
                    connect((t.inputs[0], End::Upper), (t.inputs[1], End::Upper), cap(true));
                    connect(
                        (t.outputs[0], End::Lower),
                        (t.outputs[1], End::Lower),
                        cup(true),
                    );
                }
            }
        }
    }

    // Trace a component starting at an edge end, walking away from it.
    // Returns (edges in order, events, final free end) where the final
    // end is None when the walk closed up into a circle.
    let walk = |start: EdgeId,
                start_dir_up: bool,
                visited: &mut Vec<bool>|
     -> (Vec<EdgeId>, Vec<TurnEvent>, Option<EdgeId>) {
        let mut edges = vec![start];
        let mut events = Vec::new();
        visited[start] = true;
        let (mut edge, mut up) = (start, start_dir_up);
        loop {
            let arrive = if up { End::Upper } else { End::Lower };
            match ends[edge][arrive as usize] {
                None => return (edges, events, Some(edge)),
                Some(peer) => {
                    if let Some(turn) = peer.turn {
                        events.push(turn);
                    }
                    edge = peer.edge;
                    up = peer.end == End::Lower;
                    if edge == start && up == start_dir_up {
                        return (edges, events, None);
                    }
                    edges.push(edge);
                    visited[edge] = true;
                }
            }
        }
    };

    let mut order: Vec<EdgeId> = (0..d.edge_count()).collect();
    order.sort_by_key(|&e| priority(e));

    let mut visited = vec![false; d.edge_count()];
    let mut components = Vec::new();

    // Arcs first: walk inward from each free end.
    for &e in &order {
        if visited[e] {
            continue;
        }
        let free_lower = ends[e][End::Lower as usize].is_none();
        let free_upper = ends[e][End::Upper as usize].is_none();
        if !free_lower && !free_upper {
            continue;
        }
        // Walk away from the free end: up from a bottom stub, down from a
        // top stub.
        let (edges, events, last) = walk(e, free_lower, &mut visited);
        let last = last.expect("arc walk ends on the other free end");
        let tau2_canon = events.iter().map(|t| if t.ccw { 1 } else { -1 }).sum();
        let mut sorted = edges;
        sorted.sort_unstable();
        components.push(Component {
            kind: ComponentKind::Arc,
            edges: sorted,
            events,
            endpoints: Some((e, last)),
            tau2_canon,
        });
    }

    // Remaining components are circles. Canonical orientation is
    // counterclockwise, so the trace is reversed when it came out
    // clockwise.
    for &e in &order {
        if visited[e] {
            continue;
        }
        let (edges, mut events, last) = walk(e, true, &mut visited);
        assert!(last.is_none(), "closed walk must return to its start");
        let mut tau2_canon: i64 = events.iter().map(|t| if t.ccw { 1 } else { -1 }).sum();
        assert!(
            tau2_canon == 2 || tau2_canon == -2,
            "embedded circle must have turning +1 or -1, got {tau2_canon}/2"
        );
        if tau2_canon < 0 {
            tau2_canon = -tau2_canon;
            events.reverse();
            for t in &mut events {
                t.ccw = !t.ccw;
            }
        }
        let mut sorted = edges;
        sorted.sort_unstable();
        components.push(Component {
            kind: ComponentKind::Circle,
            edges: sorted,
            events,
            endpoints: None,
            tau2_canon,
        });
    }

    components.sort_by_key(Component::min_edge);
    KauffmanState {
        markers: markers.clone(),
        components,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::TangleDiagram;
    use crate::ring::{phase, GaussianInt, LaurentPoly};

    fn parse(text: &str) -> TangleDiagram {
        TangleDiagram::parse(text).unwrap()
    }

    fn all_states(d: &TangleDiagram) -> Vec<KauffmanState> {
        enumerate_markers(d).iter().map(|m| smooth(d, m)).collect()
    }

    /// Bracket sum computed directly from a state list; used to compare
    /// traversal conventions.
    fn bracket_of(states: &[KauffmanState]) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for s in states {
            for e in s.enhance() {
                out.add_term(e.q, phase(e.p));
            }
        }
        out
    }

    #[test]
    fn marker_enumeration_is_lexicographic() {
        let d = parse("cup\nxa\ncap");
        let ms = enumerate_markers(&d);
        assert_eq!(ms.len(), 2);
        assert_eq!(ms[0].to_string(), "+");
        assert_eq!(ms[1].to_string(), "-");
        let d2 = parse("xa id\nid xb");
        let ms2 = enumerate_markers(&d2);
        assert_eq!(ms2.len(), 4);
        assert_eq!(ms2[1].to_string(), "+-");
        assert_eq!(ms2[2].to_string(), "-+");
        for (i, m) in ms2.iter().enumerate() {
            assert_eq!(m.index(), i);
        }
    }

    #[test]
    fn unknot_smooths_to_one_counterclockwise_circle() {
        let d = parse("cup\ncap");
        let s = smooth(&d, &MarkerAssignment::new(vec![]));
        assert_eq!(s.components.len(), 1);
        let c = &s.components[0];
        assert_eq!(c.kind, ComponentKind::Circle);
        assert_eq!(c.edges, vec![0, 1]);
        assert_eq!(c.events.len(), 2);
        assert_eq!(component_tau(c, false), HalfInt::from_int(1));
        assert_eq!(component_tau(c, true), HalfInt::from_int(-1));
    }

    #[test]
    fn vertical_strand_has_no_turning() {
        let d = parse("id");
        let s = smooth(&d, &MarkerAssignment::new(vec![]));
        assert_eq!(s.components.len(), 1);
        let c = &s.components[0];
        assert_eq!(c.kind, ComponentKind::Arc);
        assert_eq!(c.tau2(false), 0);
        assert_eq!(c.endpoints, Some((0, 1)));
    }

    #[test]
    fn single_cap_arc_has_half_turning() {
        let d = parse("cap");
        let s = smooth(&d, &MarkerAssignment::new(vec![]));
        let c = &s.components[0];
        assert_eq!(c.kind, ComponentKind::Arc);
        // Canonical walk starts at edge 0, climbs into the cap from the
        // left, so it turns clockwise.
        assert_eq!(component_tau(c, false), HalfInt::from_twice(-1));
        assert_eq!(component_tau(c, true), HalfInt::from_twice(1));
    }

    #[test]
    fn crossing_smoothings_match_marker_conventions() {
        let d = parse("xa");
        let plus = smooth(&d, &MarkerAssignment::new(vec![Marker::Plus]));
        assert_eq!(plus.components.len(), 2);
        assert!(plus.components.iter().all(|c| c.kind == ComponentKind::Arc));
        assert!(plus.components.iter().all(|c| c.events.is_empty()));

        let minus = smooth(&d, &MarkerAssignment::new(vec![Marker::Minus]));
        assert_eq!(minus.components.len(), 2);
        assert!(minus
            .components
            .iter()
            .all(|c| c.kind == ComponentKind::Arc && c.events.len() == 1));

        // xb smooths the opposite way.
        let db = parse("xb");
        let bplus = smooth(&db, &MarkerAssignment::new(vec![Marker::Plus]));
        assert!(bplus.components.iter().all(|c| c.events.len() == 1));
    }

    #[test]
    fn closed_kink_circle_counts() {
        let d = parse("cup\nxa\ncap");
        let plus = smooth(&d, &MarkerAssignment::from_index(1, 0));
        assert_eq!(plus.circle_count(), 1);
        let minus = smooth(&d, &MarkerAssignment::from_index(1, 1));
        assert_eq!(minus.circle_count(), 2);
    }

    #[test]
    fn enhanced_gradings_for_unknot() {
        let d = parse("cup\ncap");
        let s = smooth(&d, &MarkerAssignment::new(vec![]));
        let es = s.enhance();
        assert_eq!(es.len(), 2);
        assert_eq!((es[0].p, es[0].q), (HalfInt::from_int(1), -2));
        assert_eq!((es[1].p, es[1].q), (HalfInt::from_int(-1), 2));
        assert_eq!(es[0].sigma, 0);
    }

    #[test]
    fn enhanced_gradings_for_cap_arc() {
        let d = parse("cap");
        let s = smooth(&d, &MarkerAssignment::new(vec![]));
        let es = s.enhance();
        assert_eq!(es.len(), 2);
        assert_eq!((es[0].p, es[0].q), (HalfInt::from_twice(-1), 1));
        assert_eq!((es[1].p, es[1].q), (HalfInt::from_twice(1), -1));
    }

    #[test]
    fn state_count_is_two_to_circles() {
        let d = parse("cup\nid cup id\nxa id id\nxa id id\nid cap id\ncap");
        let mut total = 0usize;
        for s in all_states(&d) {
            assert_eq!(s.enhance().len(), 1 << s.components.len());
            total += 1 << s.components.len();
        }
        // Hopf link: markers ++/+-/-+/-- give 2/1/1/2 circles.
        assert_eq!(total, 4 + 2 + 2 + 4);
    }

    #[test]
    fn reversal_negates_tau_and_reflects_q() {
        let d = parse("cup\nxa\nxb\ncap");
        for s in all_states(&d) {
            for e in s.enhance() {
                let flipped: Vec<bool> = e.orientations.iter().map(|b| !b).collect();
                let r = s
                    .enhance()
                    .into_iter()
                    .find(|x| x.orientations == flipped)
                    .unwrap();
                assert_eq!(r.tau, -e.tau);
                assert_eq!(r.q, e.sigma + e.tau.twice());
            }
        }
    }

    #[test]
    fn boundary_directions_pair_inward_with_outward() {
        let d = parse("xa");
        let s = smooth(&d, &MarkerAssignment::from_index(1, 0));
        let dirs = s.boundary_directions(&[false, false]);
        assert_eq!(dirs.len(), 4);
        let inward = dirs.values().filter(|d| **d == BoundaryDir::Inward).count();
        assert_eq!(inward, 2);
    }

    #[test]
    fn traversal_start_order_does_not_change_gradings() {
        let texts = [
            "cup\nxa\ncap",
            "xa id\nid xa\nxa id",
            "cup\nid cup id\nxa id id\nxa id id\nid cap id\ncap",
            "cap\ncup",
        ];
        for text in texts {
            let d = parse(text);
            let edge_count = d.edge_count();
            for m in enumerate_markers(&d) {
                let canonical = vec![smooth(&d, &m)];
                let shuffled = vec![smooth_traced(&d, &m, &|e| edge_count - e)];
                let odd = vec![smooth_traced(&d, &m, &|e| e * 7 % 13)];
                let b = bracket_of(&canonical);
                assert_eq!(b, bracket_of(&shuffled), "{text} markers {m}");
                assert_eq!(b, bracket_of(&odd), "{text} markers {m}");
            }
        }
    }

    #[test]
    fn corpus_scale_arc_turning_stays_within_one() {
        let d = parse("id cup\nxa id\nid cap");
        for s in all_states(&d) {
            for c in &s.components {
                if c.kind == ComponentKind::Arc {
                    assert!(c.tau2(false).abs() <= 2);
                }
            }
        }
    }

    #[test]
    fn bracket_sum_of_unknot_from_states() {
        let d = parse("cup\ncap");
        let b = bracket_of(&all_states(&d));
        assert_eq!(b, "-A^2 - A^-2".parse().unwrap());
        let strand = bracket_of(&all_states(&parse("id")));
        assert_eq!(strand, LaurentPoly::constant(2));
        let cap = bracket_of(&all_states(&parse("cap")));
        assert_eq!(cap, "-i*A + i*A^-1".parse().unwrap());
        let _ = GaussianInt::I;
    }

    #[test]
    fn bracket_sum_of_closed_kinks_from_states() {
        // A curl closed off with a cup below and a cap above. The xb
        // version is the positive kink, -A^3 times the unknot value.
        let neg = bracket_of(&all_states(&parse("cup\nxa\ncap")));
        assert_eq!(neg, "A^-1 + A^-5".parse().unwrap());
        let pos = bracket_of(&all_states(&parse("cup\nxb\ncap")));
        assert_eq!(pos, "A^5 + A".parse().unwrap());
    }
}
