//! Sliced tile diagrams for tangles.
//!
//! A diagram is a stack of rows read bottom to top; each row is a list of
//! tiles read left to right. The five tiles are `id` (a vertical strand),
//! `xa`/`xb` (the two crossing types), `cap` (a local maximum closing two
//! strands) and `cup` (a local minimum opening two strands). Rows must
//! compose: the output arity of each row equals the input arity of the
//! next. Strand endpoints on the bottom and top edges of the stack are
//! the tangle boundary; a diagram with no boundary is closed.
//!
//! Edges (strand segments between consecutive rows, plus the boundary
//! stubs) are numbered left to right, bottom slice first; crossings are
//! numbered row-major bottom to top. Both numberings are stable under
//! re-parsing, so marker vectors and generator bases are reproducible.

use std::fmt;

use crate::{Error, Result};

/// One tile of a sliced diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tile {
    /// Vertical strand, 1 in / 1 out.
    Id,
    /// Crossing weighted by the matrix `R`, 2 in / 2 out.
    CrossA,
    /// Crossing weighted by the inverse matrix `R^-1`, 2 in / 2 out.
    CrossB,
    /// Local maximum, 2 in / 0 out.
    Cap,
    /// Local minimum, 0 in / 2 out.
    Cup,
}

impl Tile {
    pub fn in_arity(&self) -> usize {
        match self {
            Tile::Id => 1,
            Tile::CrossA | Tile::CrossB | Tile::Cap => 2,
            Tile::Cup => 0,
        }
    }

    pub fn out_arity(&self) -> usize {
        match self {
            Tile::Id => 1,
            Tile::CrossA | Tile::CrossB | Tile::Cup => 2,
            Tile::Cap => 0,
        }
    }

    pub fn is_crossing(&self) -> bool {
        matches!(self, Tile::CrossA | Tile::CrossB)
    }

    pub fn token(&self) -> &'static str {
        match self {
            Tile::Id => "id",
            Tile::CrossA => "xa",
            Tile::CrossB => "xb",
            Tile::Cap => "cap",
            Tile::Cup => "cup",
        }
    }

    fn from_token(tok: &str) -> Option<Tile> {
        match tok {
            "id" => Some(Tile::Id),
            "xa" => Some(Tile::CrossA),
            "xb" => Some(Tile::CrossB),
            "cap" => Some(Tile::Cap),
            "cup" => Some(Tile::Cup),
            _ => None,
        }
    }
}

/// Index of a strand segment; see the module doc for the numbering.
pub type EdgeId = usize;

/// Sign of a curl added by [`TangleDiagram::insert_kink`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KinkSign {
    /// Curl built from a `xa` crossing; multiplies the bracket by `-A^3`.
    Positive,
    /// Curl built from a `xb` crossing; multiplies the bracket by `-A^-3`.
    Negative,
}

/// A tile placed in the grid, with its incident edges resolved.
#[derive(Debug, Clone)]
pub struct PlacedTile {
    pub tile: Tile,
    pub row: usize,
    pub col: usize,
    pub inputs: Vec<EdgeId>,
    pub outputs: Vec<EdgeId>,
    /// Occurrence index among crossing tiles (row-major), if a crossing.
    pub crossing: Option<usize>,
}

/// A validated sliced diagram with edge and crossing numberings.
#[derive(Debug, Clone)]
pub struct TangleDiagram {
    rows: Vec<Vec<Tile>>,
    bottom_arity: usize,
    top_arity: usize,
    tiles: Vec<PlacedTile>,
    /// `id_of_occurrence[k]` is the crossing id of the k-th crossing tile
    /// in row-major order. Identity unless relabeled.
    id_of_occurrence: Vec<usize>,
    occurrence_of_id: Vec<usize>,
    edge_count: usize,
    bottom_edges: Vec<EdgeId>,
    top_edges: Vec<EdgeId>,
}

impl TangleDiagram {
    /// Parse the text format: one row per line, bottom row first, tiles
    /// separated by whitespace. `#` starts a comment; blank lines are
    /// skipped.
    pub fn parse(text: &str) -> Result<TangleDiagram> {
        let mut rows = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let mut row = Vec::new();
            for tok in line.split_whitespace() {
                match Tile::from_token(tok) {
                    Some(t) => row.push(t),
                    None => {
                        return Err(Error::UnknownToken {
                            line: lineno + 1,
                            token: tok.to_string(),
                        })
                    }
                }
            }
            if !row.is_empty() {
                rows.push(row);
            }
        }
        TangleDiagram::from_rows(rows)
    }

    /// Build and validate a diagram from a row list.
    pub fn from_rows(rows: Vec<Vec<Tile>>) -> Result<TangleDiagram> {
        if rows.is_empty() {
            return Err(Error::EmptyDiagram);
        }
        let row_in = |row: &[Tile]| row.iter().map(Tile::in_arity).sum::<usize>();
        let row_out = |row: &[Tile]| row.iter().map(Tile::out_arity).sum::<usize>();

        let bottom_arity = row_in(&rows[0]);
        let mut prev_out = bottom_arity; // edges feeding row 0
        for (r, row) in rows.iter().enumerate() {
            let found = row_in(row);
            if found != prev_out {
                return Err(Error::ArityMismatch {
                    row: r,
                    expected: prev_out,
                    found,
                });
            }
            prev_out = row_out(row);
        }
        let top_arity = prev_out;

        // Assign edge ids: bottom boundary first, then each row's outputs.
        let bottom_edges: Vec<EdgeId> = (0..bottom_arity).collect();
        let mut level = bottom_edges.clone();
        let mut next_edge = bottom_arity;
        let mut tiles = Vec::new();
        let mut crossings = 0usize;
        for (r, row) in rows.iter().enumerate() {
            let mut in_cursor = 0usize;
            let mut out_level = Vec::new();
            for (c, &tile) in row.iter().enumerate() {
                let inputs = level[in_cursor..in_cursor + tile.in_arity()].to_vec();
                in_cursor += tile.in_arity();
                let outputs: Vec<EdgeId> = (0..tile.out_arity())
                    .map(|k| next_edge + k)
                    .collect();
                next_edge += tile.out_arity();
                out_level.extend_from_slice(&outputs);
                let crossing = tile.is_crossing().then(|| {
                    crossings += 1;
                    crossings - 1
                });
                tiles.push(PlacedTile {
                    tile,
                    row: r,
                    col: c,
                    inputs,
                    outputs,
                    crossing,
                });
            }
            level = out_level;
        }

        Ok(TangleDiagram {
            rows,
            bottom_arity,
            top_arity,
            tiles,
            id_of_occurrence: (0..crossings).collect(),
            occurrence_of_id: (0..crossings).collect(),
            edge_count: next_edge,
            bottom_edges,
            top_edges: level,
        })
    }

    /// Re-check the row composition invariants. Construction already
    /// enforces them; this re-derives everything from the row list.
    pub fn validate(&self) -> Result<()> {
        let rebuilt = TangleDiagram::from_rows(self.rows.clone())?;
        debug_assert_eq!(rebuilt.edge_count, self.edge_count);
        Ok(())
    }

    /// Render back to the text format (no comments).
    pub fn render(&self) -> String {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(Tile::token)
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn rows(&self) -> &[Vec<Tile>] {
        &self.rows
    }

    pub fn tiles(&self) -> &[PlacedTile] {
        &self.tiles
    }

    pub fn bottom_arity(&self) -> usize {
        self.bottom_arity
    }

    pub fn top_arity(&self) -> usize {
        self.top_arity
    }

    pub fn is_closed(&self) -> bool {
        self.bottom_arity == 0 && self.top_arity == 0
    }

    pub fn crossing_count(&self) -> usize {
        self.id_of_occurrence.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn bottom_edges(&self) -> &[EdgeId] {
        &self.bottom_edges
    }

    pub fn top_edges(&self) -> &[EdgeId] {
        &self.top_edges
    }

    /// Boundary edges, bottom ones first.
    pub fn boundary_edges(&self) -> Vec<EdgeId> {
        let mut out = self.bottom_edges.clone();
        out.extend_from_slice(&self.top_edges);
        out
    }

    pub fn crossing_id(&self, occurrence: usize) -> usize {
        self.id_of_occurrence[occurrence]
    }

    pub fn crossing_occurrence(&self, id: usize) -> usize {
        self.occurrence_of_id[id]
    }

    /// The placed tile of the crossing with the given id.
    pub fn crossing_tile(&self, id: usize) -> &PlacedTile {
        let occ = self.occurrence_of_id[id];
        self.tiles
            .iter()
            .find(|t| t.crossing == Some(occ))
            .expect("crossing occurrence present")
    }

    /// The four edges meeting the crossing with the given id
    /// (two inputs, then two outputs).
    pub fn crossing_edges(&self, id: usize) -> [EdgeId; 4] {
        let t = self.crossing_tile(id);
        [t.inputs[0], t.inputs[1], t.outputs[0], t.outputs[1]]
    }

    /// Relabel crossing ids by a permutation: the crossing currently
    /// labeled `k` becomes `perm[k]`. Homology must not depend on this.
    pub fn permute_crossing_ids(&self, perm: &[usize]) -> TangleDiagram {
        let n = self.crossing_count();
        assert_eq!(perm.len(), n, "permutation length mismatch");
        let mut seen = vec![false; n];
        for &p in perm {
            assert!(p < n && !seen[p], "not a permutation");
            seen[p] = true;
        }
        let mut out = self.clone();
        for occ in 0..n {
            out.id_of_occurrence[occ] = perm[self.id_of_occurrence[occ]];
        }
        for (occ, &id) in out.id_of_occurrence.iter().enumerate() {
            out.occurrence_of_id[id] = occ;
        }
        out
    }

    /// Swap the two crossing types everywhere (mirror image).
    pub fn mirror(&self) -> TangleDiagram {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|t| match t {
                        Tile::CrossA => Tile::CrossB,
                        Tile::CrossB => Tile::CrossA,
                        other => *other,
                    })
                    .collect()
            })
            .collect();
        TangleDiagram::from_rows(rows).expect("mirror preserves validity")
    }

    /// Place `other` to the right of `self` (disjoint union for closed
    /// diagrams). The shorter diagram is padded on top with identity rows.
    pub fn beside(&self, other: &TangleDiagram) -> TangleDiagram {
        let height = self.rows.len().max(other.rows.len());
        let pick = |d: &TangleDiagram, i: usize| -> Vec<Tile> {
            if i < d.rows.len() {
                d.rows[i].clone()
            } else {
                vec![Tile::Id; d.top_arity]
            }
        };
        let mut rows = Vec::with_capacity(height);
        for i in 0..height {
            let mut row = pick(self, i);
            row.extend(pick(other, i));
            rows.push(row);
        }
        TangleDiagram::from_rows(rows).expect("side-by-side rows compose")
    }

    /// Append three rows realizing a curl on the given top strand. The
    /// strand crosses a small loop opened to its right and closed above.
    pub fn insert_kink(&self, strand: usize, sign: KinkSign) -> Result<TangleDiagram> {
        if strand >= self.top_arity {
            return Err(Error::StrandOutOfRange {
                strand,
                arity: self.top_arity,
            });
        }
        let w = self.top_arity;
        let cross = match sign {
            KinkSign::Positive => Tile::CrossA,
            KinkSign::Negative => Tile::CrossB,
        };
        let mut rows = self.rows.clone();
        let mut open = vec![Tile::Id; strand + 1];
        open.push(Tile::Cup);
        open.extend(vec![Tile::Id; w - 1 - strand]);
        let mut turn = vec![Tile::Id; strand];
        turn.push(cross);
        turn.extend(vec![Tile::Id; w - strand]);
        let mut close = vec![Tile::Id; strand + 1];
        close.push(Tile::Cap);
        close.extend(vec![Tile::Id; w - 1 - strand]);
        rows.push(open);
        rows.push(turn);
        rows.push(close);
        TangleDiagram::from_rows(rows)
    }
}

impl fmt::Display for TangleDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}
