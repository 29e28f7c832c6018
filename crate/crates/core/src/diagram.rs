//! Knot shadow diagrams and the brute-force state sum.
//!
//! A [`Shadow`] is a 4-valent diagram given combinatorially: `m` crossings,
//! each with four ports in counterclockwise order, a perfect matching of all
//! ports into edges, and a count of crossing-free closed components. The two
//! strands passing through a crossing connect opposite ports, so port `p`
//! continues to `p ^ 2`.
//!
//! Resolving every crossing with a type 0 or type 1 split turns the diagram
//! into disjoint circles; [`Shadow::state_sum`] enumerates all `2^m`
//! resolutions and tallies circle counts into a polynomial. Circle counting is
//! a union-find pass over ports, so no planar embedding is ever needed.
//!
//! Surgery (`disjoint_union`, `connected_sum`, `self_closure`) works on the
//! port matching. Cutting an edge `(a, b)` leaves an `a`-side and a `b`-side
//! end; when two cut edges are rejoined, first ends bridge to first ends and
//! second ends to second ends. Constructors record canonical cut points so
//! chained diagrams close into the intended rings.

use crate::algebra::Polynomial;
use num_bigint::BigInt;
use std::fmt;
use std::ops::Range;
use thiserror::Error;

/// Global port id: `4 * crossing + port_index`.
pub type Port = u32;

/// Default upper bound on crossings for brute-force enumeration.
pub const DEFAULT_CROSSING_GUARD: usize = 30;

/// Hard cap on any guard override.
pub const MAX_CROSSING_GUARD: usize = 34;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("state assignment has {got} bits, diagram has {expected} crossings")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{count} crossings exceed the enumeration guard of {guard}")]
    TooManyCrossings { count: usize, guard: usize },
    #[error("arc reference does not name a position on this diagram")]
    InvalidArc,
    #[error("invalid cut point pair")]
    InvalidCut,
    #[error("malformed diagram: {0}")]
    Malformed(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A position on a diagram: a slot on an edge, or a slot on a free loop.
///
/// Slots order positions along an edge from its first stored end to its
/// second; two distinct slots may sit on the same edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArcRef {
    Edge { edge: usize, slot: u8 },
    Loop { index: usize, slot: u8 },
}

impl ArcRef {
    pub fn edge(edge: usize, slot: u8) -> Self {
        ArcRef::Edge { edge, slot }
    }

    pub fn on_loop(index: usize, slot: u8) -> Self {
        ArcRef::Loop { index, slot }
    }
}

/// One split choice per crossing: bit `i` is the split type at crossing `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StateAssignment {
    bits: u64,
    len: usize,
}

impl StateAssignment {
    pub fn new(bits: u64, len: usize) -> Self {
        assert!(len <= 64);
        StateAssignment { bits, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bit(&self, i: usize) -> bool {
        (self.bits >> i) & 1 == 1
    }

    pub fn flipped(&self, i: usize) -> Self {
        StateAssignment {
            bits: self.bits ^ (1 << i),
            len: self.len,
        }
    }
}

/// A 4-valent knot shadow diagram.
#[derive(Clone, PartialEq, Eq)]
pub struct Shadow {
    crossings: usize,
    /// Perfect matching on ports; pairs stored `(min, max)`, sorted by first port.
    edges: Vec<(Port, Port)>,
    free_loops: usize,
    cut_points: Vec<ArcRef>,
}

impl fmt::Debug for Shadow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Shadow {{ crossings: {}, edges: {:?}, loops: {}, cuts: {:?} }}",
            self.crossings, self.edges, self.free_loops, self.cut_points
        )
    }
}

/// Result of [`Shadow::validate`].
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub valid: bool,
    pub issues: Vec<String>,
    /// Connected components of the underlying 4-valent graph, free loops included.
    pub graph_components: usize,
    pub crossings: usize,
    pub free_loops: usize,
}

impl Shadow {
    /// The empty diagram (state sum 1, the empty-product convention).
    pub fn empty() -> Self {
        Shadow {
            crossings: 0,
            edges: Vec::new(),
            free_loops: 0,
            cut_points: Vec::new(),
        }
    }

    /// A single crossing-free closed loop, with its two canonical cut points.
    pub fn unknot() -> Self {
        Shadow::loops(1)
    }

    /// `n` disjoint crossing-free loops.
    pub fn loops(n: usize) -> Self {
        let cut_points = if n > 0 {
            vec![ArcRef::on_loop(0, 0), ArcRef::on_loop(0, 1)]
        } else {
            Vec::new()
        };
        Shadow {
            crossings: 0,
            edges: Vec::new(),
            free_loops: n,
            cut_points,
        }
    }

    /// Builds a diagram from crossings and an explicit port matching.
    ///
    /// Every port `0..4m` must appear in exactly one edge.
    pub fn from_parts(
        crossings: usize,
        edges: Vec<(Port, Port)>,
        free_loops: usize,
        cut_points: Vec<ArcRef>,
    ) -> Result<Self, DiagramError> {
        let mut shadow = Shadow {
            crossings,
            edges: normalize_edges(edges),
            free_loops,
            cut_points: Vec::new(),
        };
        let report = shadow.validate();
        if !report.valid {
            return Err(DiagramError::Malformed(report.issues.join("; ")));
        }
        for &c in &cut_points {
            shadow.check_arc(c)?;
        }
        shadow.cut_points = cut_points;
        Ok(shadow)
    }

    pub fn crossings(&self) -> usize {
        self.crossings
    }

    pub fn edges(&self) -> &[(Port, Port)] {
        &self.edges
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn cut_points(&self) -> &[ArcRef] {
        &self.cut_points
    }

    pub fn is_empty(&self) -> bool {
        self.crossings == 0 && self.free_loops == 0
    }

    /// Canonical entry arc (first recorded cut point).
    pub fn entry_arc(&self) -> Result<ArcRef, DiagramError> {
        self.cut_points
            .first()
            .copied()
            .ok_or(DiagramError::InvalidArc)
    }

    /// Canonical exit arc (last recorded cut point).
    pub fn exit_arc(&self) -> Result<ArcRef, DiagramError> {
        self.cut_points
            .last()
            .copied()
            .ok_or(DiagramError::InvalidArc)
    }

    pub fn with_cut_points(mut self, cut_points: Vec<ArcRef>) -> Result<Self, DiagramError> {
        for &c in &cut_points {
            self.check_arc(c)?;
        }
        self.cut_points = cut_points;
        Ok(self)
    }

    fn check_arc(&self, arc: ArcRef) -> Result<(), DiagramError> {
        let ok = match arc {
            ArcRef::Edge { edge, slot } => edge < self.edges.len() && slot <= 1,
            ArcRef::Loop { index, slot } => index < self.free_loops && slot <= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(DiagramError::InvalidArc)
        }
    }

    /// Checks the perfect-matching invariant and cut-point validity.
    pub fn validate(&self) -> ValidationReport {
        let mut issues = Vec::new();
        let n_ports = 4 * self.crossings;
        let mut seen = vec![0usize; n_ports];
        for &(a, b) in &self.edges {
            for p in [a, b] {
                if (p as usize) < n_ports {
                    seen[p as usize] += 1;
                } else {
                    issues.push(format!("edge references unknown port {p}"));
                }
            }
        }
        for (p, &count) in seen.iter().enumerate() {
            if count != 1 {
                issues.push(format!("port {p} appears in {count} edges"));
            }
        }
        for &c in &self.cut_points {
            if self.check_arc(c).is_err() {
                issues.push(format!("cut point {c:?} is out of range"));
            }
        }

        let mut components = self.free_loops;
        if issues.is_empty() && self.crossings > 0 {
            let mut uf = UnionFind::new(n_ports);
            for c in 0..self.crossings {
                let base = 4 * c as Port;
                uf.union(base, base + 1);
                uf.union(base, base + 2);
                uf.union(base, base + 3);
            }
            for &(a, b) in &self.edges {
                uf.union(a, b);
            }
            components += uf.count_roots();
        }

        ValidationReport {
            valid: issues.is_empty(),
            issues,
            graph_components: components,
            crossings: self.crossings,
            free_loops: self.free_loops,
        }
    }

    /// Number of circles after splitting every crossing as `state` dictates.
    pub fn resolve_state(&self, state: &StateAssignment) -> Result<usize, DiagramError> {
        if state.len() != self.crossings {
            return Err(DiagramError::LengthMismatch {
                expected: self.crossings,
                got: state.len(),
            });
        }
        let mut uf = UnionFind::new(4 * self.crossings);
        Ok(self.resolve_into(state.bits, &mut uf) + self.free_loops)
    }

    /// Circles among the ports only (free loops excluded); `uf` is reused.
    fn resolve_into(&self, bits: u64, uf: &mut UnionFind) -> usize {
        uf.reset();
        for &(a, b) in &self.edges {
            uf.union(a, b);
        }
        for c in 0..self.crossings {
            let base = 4 * c as Port;
            if (bits >> c) & 1 == 0 {
                // type 0 split joins ports (0,1) and (2,3)
                uf.union(base, base + 1);
                uf.union(base + 2, base + 3);
            } else {
                // type 1 split joins ports (1,2) and (3,0)
                uf.union(base + 1, base + 2);
                uf.union(base + 3, base);
            }
        }
        uf.count_roots()
    }

    /// The state-sum generating polynomial, one `x^circles` term per state.
    ///
    /// Enumerates all `2^m` assignments; guarded by [`DEFAULT_CROSSING_GUARD`].
    pub fn state_sum(&self) -> Result<Polynomial, DiagramError> {
        self.state_sum_guarded(DEFAULT_CROSSING_GUARD)
    }

    pub fn state_sum_guarded(&self, guard: usize) -> Result<Polynomial, DiagramError> {
        if self.crossings > guard.min(63) {
            return Err(DiagramError::TooManyCrossings {
                count: self.crossings,
                guard,
            });
        }
        let total: u64 = 1u64 << self.crossings;
        let counts = self.state_circle_counts(0..total);
        Ok(counts_to_polynomial(&counts))
    }

    /// Tallies circle counts over a range of state indices.
    ///
    /// Disjoint ranges can be tallied independently and merged by elementwise
    /// addition; addition commutes, so any partition of `0..2^m` reproduces
    /// the single-pass polynomial bit for bit.
    pub fn state_circle_counts(&self, range: Range<u64>) -> Vec<u64> {
        let max_circles = 2 * self.crossings + self.free_loops + 1;
        let mut counts = vec![0u64; max_circles + 1];
        let mut uf = UnionFind::new(4 * self.crossings);
        for bits in range {
            let circles = self.resolve_into(bits, &mut uf) + self.free_loops;
            counts[circles] += 1;
        }
        counts
    }

    /// Side-by-side placement; state sums multiply.
    pub fn disjoint_union(&self, other: &Shadow) -> Shadow {
        let off = 4 * self.crossings as Port;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(a, b)| (a + off, b + off)));
        let cut_points = if !self.cut_points.is_empty() {
            self.cut_points.clone()
        } else {
            other
                .cut_points
                .iter()
                .map(|&c| match c {
                    ArcRef::Edge { edge, slot } => ArcRef::Edge {
                        edge: edge + self.edges.len(),
                        slot,
                    },
                    ArcRef::Loop { index, slot } => ArcRef::Loop {
                        index: index + self.free_loops,
                        slot,
                    },
                })
                .collect()
        };
        // other's ports all exceed self's, so self's edge indices are stable.
        Shadow {
            crossings: self.crossings + other.crossings,
            edges: normalize_edges(edges),
            free_loops: self.free_loops + other.free_loops,
            cut_points,
        }
    }

    /// Connected sum: cut one arc in each diagram and bridge the four ends so
    /// one closed curve traverses `self` then `other`.
    ///
    /// The result records canonical cut points at this diagram's entry arc and
    /// `other`'s exit arc, which is where a later closure cuts.
    pub fn connected_sum(
        &self,
        arc_a: ArcRef,
        other: &Shadow,
        arc_b: ArcRef,
    ) -> Result<Shadow, DiagramError> {
        if self.is_empty() || other.is_empty() {
            return Err(DiagramError::InvalidArc);
        }
        self.check_arc(arc_a)?;
        other.check_arc(arc_b)?;

        let off = 4 * self.crossings as Port;
        let in_a = |arc: ArcRef| -> Pos {
            match arc {
                ArcRef::Edge { edge, slot } => Pos::Edge(self.edges[edge], slot),
                ArcRef::Loop { index, slot } => Pos::Loop(index, slot),
            }
        };
        let in_b = |arc: ArcRef| -> Pos {
            match arc {
                ArcRef::Edge { edge, slot } => {
                    let (a, b) = other.edges[edge];
                    Pos::Edge((a + off, b + off), slot)
                }
                ArcRef::Loop { index, slot } => Pos::Loop(index + self.free_loops, slot),
            }
        };

        let entry = self
            .cut_points
            .first()
            .map(|&c| in_a(c))
            .or_else(|| other.cut_points.first().map(|&c| in_b(c)));
        let exit = other
            .cut_points
            .last()
            .map(|&c| in_b(c))
            .or_else(|| self.cut_points.last().map(|&c| in_a(c)));

        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(a, b)| (a + off, b + off)));
        let mut work = Workspace {
            edges,
            loops: self.free_loops + other.free_loops,
            new_cut_edges: Vec::new(),
            removed_edges: Vec::new(),
            removed_loop: None,
            loop_target: None,
        };
        // When a cut arc carries another canonical cut point (closed chains
        // keep both cuts on one wrap arc), the bridges must swap sides so the
        // surviving cut lands on an arc whose end order still runs toward the
        // partner diagram; otherwise a later closure would pair unlike ends.
        let cross = self.has_resident_cut(arc_a) || other.has_resident_cut(arc_b);
        work.splice(in_a(arc_a), in_b(arc_b), cross)?;
        work.finish(self.crossings + other.crossings, [entry, exit])
    }

    /// Closure: cut the diagram at two positions and reconnect each strand to
    /// itself, adding no crossings.
    ///
    /// When both cuts sit on the same edge or the same loop, the piece between
    /// them closes into a fresh free loop and the rest reconnects, yielding
    /// `self ⊔ U`.
    pub fn self_closure(&self, c1: ArcRef, c2: ArcRef) -> Result<Shadow, DiagramError> {
        self.check_arc(c1).map_err(|_| DiagramError::InvalidCut)?;
        self.check_arc(c2).map_err(|_| DiagramError::InvalidCut)?;
        if c1 == c2 {
            return Err(DiagramError::InvalidCut);
        }
        let resolve = |arc: ArcRef| -> Pos {
            match arc {
                ArcRef::Edge { edge, slot } => Pos::Edge(self.edges[edge], slot),
                ArcRef::Loop { index, slot } => Pos::Loop(index, slot),
            }
        };
        let mut work = Workspace {
            edges: self.edges.clone(),
            loops: self.free_loops,
            new_cut_edges: Vec::new(),
            removed_edges: Vec::new(),
            removed_loop: None,
            loop_target: None,
        };
        work.splice(resolve(c1), resolve(c2), false)?;
        let cuts = work.closure_cuts();
        work.finish(self.crossings, cuts)
    }

    /// True when another recorded cut point sits on the same edge as `arc`.
    fn has_resident_cut(&self, arc: ArcRef) -> bool {
        let ArcRef::Edge { edge, slot } = arc else {
            return false;
        };
        self.cut_points.iter().any(|&c| match c {
            ArcRef::Edge { edge: e, slot: s } => e == edge && s != slot,
            ArcRef::Loop { .. } => false,
        })
    }
}

impl Shadow {
    /// Serializes to the text format: `loops:` and `cuts:` headers, then one
    /// line per crossing listing each port's peer as `crossing.port`.
    ///
    /// Cut entries read `edge:slot` (edges numbered in canonical order) or
    /// `loop<i>:slot`. Round-trips exactly through [`Shadow::from_text`].
    pub fn to_text(&self) -> String {
        let mut peer = vec![0 as Port; 4 * self.crossings];
        for &(a, b) in &self.edges {
            peer[a as usize] = b;
            peer[b as usize] = a;
        }
        let mut out = format!("loops: {}\n", self.free_loops);
        out.push_str("cuts:");
        for (i, &c) in self.cut_points.iter().enumerate() {
            out.push(if i == 0 { ' ' } else { ',' });
            match c {
                ArcRef::Edge { edge, slot } => out.push_str(&format!("{edge}:{slot}")),
                ArcRef::Loop { index, slot } => out.push_str(&format!("loop{index}:{slot}")),
            }
        }
        out.push('\n');
        for c in 0..self.crossings {
            out.push_str(&format!("{c}:"));
            for i in 0..4 {
                let q = peer[4 * c + i];
                out.push_str(&format!(" {}.{}", q / 4, q % 4));
            }
            out.push('\n');
        }
        out
    }

    /// Parses the [`Shadow::to_text`] format.
    pub fn from_text(text: &str) -> Result<Shadow, DiagramError> {
        let err = |line: usize, message: &str| DiagramError::Parse {
            line,
            message: message.to_string(),
        };
        let mut loops: Option<usize> = None;
        let mut cuts_raw: Option<String> = None;
        let mut peers: Vec<(usize, Vec<Port>)> = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("loops:") {
                loops = Some(
                    rest.trim()
                        .parse()
                        .map_err(|_| err(ln + 1, "bad loop count"))?,
                );
            } else if let Some(rest) = line.strip_prefix("cuts:") {
                cuts_raw = Some(rest.trim().to_string());
            } else {
                let (head, rest) = line
                    .split_once(':')
                    .ok_or_else(|| err(ln + 1, "expected `crossing: peer peer peer peer`"))?;
                let idx: usize = head
                    .trim()
                    .parse()
                    .map_err(|_| err(ln + 1, "bad crossing index"))?;
                let mut ports = Vec::with_capacity(4);
                for tok in rest.split_whitespace() {
                    let (c, p) = tok
                        .split_once('.')
                        .ok_or_else(|| err(ln + 1, "peer must be `crossing.port`"))?;
                    let c: Port = c.parse().map_err(|_| err(ln + 1, "bad peer crossing"))?;
                    let p: Port = p.parse().map_err(|_| err(ln + 1, "bad peer port"))?;
                    if p > 3 {
                        return Err(err(ln + 1, "port index must be 0..=3"));
                    }
                    ports.push(4 * c + p);
                }
                if ports.len() != 4 {
                    return Err(err(ln + 1, "each crossing line lists four peers"));
                }
                peers.push((idx, ports));
            }
        }
        let loops = loops.ok_or_else(|| err(0, "missing `loops:` header"))?;
        let crossings = peers.len();
        peers.sort_by_key(|&(idx, _)| idx);
        for (want, &(got, _)) in peers.iter().enumerate() {
            if want != got {
                return Err(err(0, "crossing lines must cover 0..m exactly once"));
            }
        }
        let mut peer = vec![Port::MAX; 4 * crossings];
        for (c, ports) in &peers {
            for (i, &q) in ports.iter().enumerate() {
                peer[4 * c + i] = q;
            }
        }
        // every port must name a partner that names it back
        let mut edges = Vec::new();
        for (p, &q) in peer.iter().enumerate() {
            let p = p as Port;
            if (q as usize) >= peer.len() || peer[q as usize] != p || q == p {
                return Err(err(0, "peer table is not symmetric"));
            }
            if p < q {
                edges.push((p, q));
            }
        }

        let mut cut_points = Vec::new();
        if let Some(raw) = cuts_raw {
            for tok in raw.split(',').filter(|t| !t.trim().is_empty()) {
                let tok = tok.trim();
                let (target, slot) = tok
                    .split_once(':')
                    .ok_or_else(|| err(0, "cut must be `edge:slot` or `loopN:slot`"))?;
                let slot: u8 = slot.parse().map_err(|_| err(0, "bad cut slot"))?;
                let arc = if let Some(l) = target.strip_prefix("loop") {
                    ArcRef::Loop {
                        index: l.parse().map_err(|_| err(0, "bad loop index"))?,
                        slot,
                    }
                } else {
                    ArcRef::Edge {
                        edge: target.parse().map_err(|_| err(0, "bad edge index"))?,
                        slot,
                    }
                };
                cut_points.push(arc);
            }
        }
        Shadow::from_parts(crossings, edges, loops, cut_points)
    }
}

fn normalize_edges(edges: Vec<(Port, Port)>) -> Vec<(Port, Port)> {
    let mut edges: Vec<(Port, Port)> = edges.into_iter().map(|(a, b)| norm_pair(a, b)).collect();
    edges.sort_unstable();
    edges
}

fn norm_pair(a: Port, b: Port) -> (Port, Port) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn counts_to_polynomial(counts: &[u64]) -> Polynomial {
    Polynomial::from_coeffs(counts.iter().map(|&c| BigInt::from(c)).collect())
}

/// Position with a stable identity during surgery: edges are identified by
/// their port pair, not their index.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Pos {
    Edge((Port, Port), u8),
    Loop(usize, u8),
}

/// Where the residents of a removed edge went.
struct RemovedEdge {
    old: (Port, Port),
    cut_slot: u8,
    /// Bridge holding positions below the cut slot.
    lower: (Port, Port),
    /// Bridge holding positions above the cut slot.
    higher: (Port, Port),
}

/// Mutable edge/loop scratch for one surgery step.
struct Workspace {
    edges: Vec<(Port, Port)>,
    loops: usize,
    /// Arcs created or designated by the surgery, in creation order.
    new_cut_edges: Vec<(Port, Port)>,
    removed_edges: Vec<RemovedEdge>,
    /// A consumed free loop, and the position its residents migrate to.
    removed_loop: Option<usize>,
    loop_target: Option<Pos>,
}

impl Workspace {
    /// Performs the two-cut surgery on the working state. `cross` swaps which
    /// ends of the two cut arcs are bridged together.
    fn splice(&mut self, a: Pos, b: Pos, cross: bool) -> Result<(), DiagramError> {
        match (a, b) {
            (Pos::Edge(e1, s1), Pos::Edge(e2, s2)) => {
                if e1 == e2 {
                    if s1 == s2 {
                        return Err(DiagramError::InvalidCut);
                    }
                    // the piece between the two cuts closes into a free loop
                    self.loops += 1;
                    self.new_cut_edges.push(e1);
                } else {
                    self.remove_edge(e1);
                    self.remove_edge(e2);
                    let (m2a, m2b) = if cross { (e2.1, e2.0) } else { (e2.0, e2.1) };
                    let bridge_a = norm_pair(e1.0, m2a);
                    let bridge_b = norm_pair(e1.1, m2b);
                    self.edges.push(bridge_a);
                    self.edges.push(bridge_b);
                    // lower slots sit on the piece attached to the edge's
                    // first end, higher slots on the second end's piece
                    self.removed_edges.push(RemovedEdge {
                        old: e1,
                        cut_slot: s1,
                        lower: bridge_a,
                        higher: bridge_b,
                    });
                    let (lo2, hi2) = if cross {
                        (bridge_b, bridge_a)
                    } else {
                        (bridge_a, bridge_b)
                    };
                    self.removed_edges.push(RemovedEdge {
                        old: e2,
                        cut_slot: s2,
                        lower: lo2,
                        higher: hi2,
                    });
                    self.new_cut_edges.push(bridge_a);
                    self.new_cut_edges.push(bridge_b);
                }
            }
            (Pos::Edge(e, _), Pos::Loop(l, _)) | (Pos::Loop(l, _), Pos::Edge(e, _)) => {
                // the loop opens and splices into the edge
                self.loops -= 1;
                self.removed_loop = Some(l);
                self.loop_target = Some(Pos::Edge(e, 0));
                self.new_cut_edges.push(e);
            }
            (Pos::Loop(l1, s1), Pos::Loop(l2, s2)) => {
                if l1 == l2 {
                    if s1 == s2 {
                        return Err(DiagramError::InvalidCut);
                    }
                    // the arc between the cuts closes off as its own loop
                    self.loops += 1;
                } else {
                    self.loops -= 1;
                    self.removed_loop = Some(l1.max(l2));
                    self.loop_target = Some(Pos::Loop(l1.min(l2), 0));
                }
            }
        }
        Ok(())
    }

    fn remove_edge(&mut self, e: (Port, Port)) {
        let idx = self
            .edges
            .iter()
            .position(|&x| x == e)
            .expect("edge disappeared during surgery");
        self.edges.swap_remove(idx);
    }

    /// Carries an old position through the surgery.
    fn patch(&self, pos: Pos) -> Option<Pos> {
        match pos {
            Pos::Edge(e, s) => {
                for removed in &self.removed_edges {
                    if removed.old == e {
                        return if s == removed.cut_slot {
                            None
                        } else if s < removed.cut_slot {
                            Some(Pos::Edge(removed.lower, s))
                        } else {
                            Some(Pos::Edge(removed.higher, s))
                        };
                    }
                }
                Some(Pos::Edge(e, s))
            }
            Pos::Loop(l, s) => match self.removed_loop {
                Some(r) if l == r => self.loop_target.map(|t| match t {
                    Pos::Edge(e, _) => Pos::Edge(e, s),
                    Pos::Loop(i, _) => Pos::Loop(i, s),
                }),
                Some(r) if l > r => Some(Pos::Loop(l - 1, s)),
                _ => Some(Pos::Loop(l, s)),
            },
        }
    }

    /// Canonical cut points for a closure result: both slots on the first
    /// surgery-created arc, or on a free loop when the surgery was loop-level.
    fn closure_cuts(&self) -> [Option<Pos>; 2] {
        if let Some(&e) = self.new_cut_edges.first() {
            [Some(Pos::Edge(e, 0)), Some(Pos::Edge(e, 1))]
        } else if self.loops > 0 {
            [Some(Pos::Loop(0, 0)), Some(Pos::Loop(0, 1))]
        } else {
            [None, None]
        }
    }

    /// Normalizes edges and resolves surviving positions to arc references.
    fn finish(self, crossings: usize, cuts: [Option<Pos>; 2]) -> Result<Shadow, DiagramError> {
        let patched: Vec<Pos> = cuts
            .into_iter()
            .flatten()
            .filter_map(|p| self.patch(p))
            .collect();
        let edges = normalize_edges(self.edges);
        let mut cut_points = Vec::new();
        for pos in patched {
            let arc = match pos {
                Pos::Edge((a, b), s) => {
                    let idx = edges
                        .binary_search(&norm_pair(a, b))
                        .map_err(|_| DiagramError::InvalidArc)?;
                    ArcRef::Edge { edge: idx, slot: s }
                }
                Pos::Loop(i, s) => ArcRef::Loop { index: i, slot: s },
            };
            if !cut_points.contains(&arc) {
                cut_points.push(arc);
            }
        }
        cut_points.truncate(2);
        Shadow::from_parts(crossings, edges, self.loops, cut_points)
    }
}

/// Plain union-find with path halving, reusable across states.
struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i as u32;
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra.max(rb) as usize] = ra.min(rb);
        }
    }

    fn count_roots(&mut self) -> usize {
        let n = self.parent.len();
        let mut count = 0;
        for i in 0..n as u32 {
            if self.find(i) == i {
                count += 1;
            }
        }
        count
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Polynomial;

    fn p(coeffs: &[i64]) -> Polynomial {
        Polynomial::from_ints(coeffs)
    }

    /// The 1-twist loop: one crossing capped on both sides.
    fn twist_loop_1() -> Shadow {
        Shadow::from_parts(
            1,
            vec![(0, 3), (1, 2)],
            0,
            vec![ArcRef::edge(0, 0), ArcRef::edge(1, 1)],
        )
        .unwrap()
    }

    #[test]
    fn unknot_resolves_to_one_circle() {
        let u = Shadow::unknot();
        assert_eq!(u.resolve_state(&StateAssignment::new(0, 0)).unwrap(), 1);
        assert_eq!(u.state_sum().unwrap(), Polynomial::x());
    }

    #[test]
    fn empty_shadow_state_sum_is_one() {
        assert_eq!(Shadow::empty().state_sum().unwrap(), Polynomial::one());
    }

    #[test]
    fn twist_loop_states() {
        let t1 = twist_loop_1();
        let counts: Vec<usize> = (0..2)
            .map(|b| t1.resolve_state(&StateAssignment::new(b, 1)).unwrap())
            .collect();
        let mut sorted = counts.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![1, 2]);
        assert_eq!(t1.state_sum().unwrap(), p(&[0, 1, 1]));
    }

    #[test]
    fn length_mismatch_is_reported() {
        let t1 = twist_loop_1();
        assert_eq!(
            t1.resolve_state(&StateAssignment::new(0, 2)),
            Err(DiagramError::LengthMismatch {
                expected: 1,
                got: 2
            })
        );
    }

    #[test]
    fn guard_rejects_large_diagrams() {
        let t1 = twist_loop_1();
        assert!(matches!(
            t1.state_sum_guarded(0),
            Err(DiagramError::TooManyCrossings { count: 1, guard: 0 })
        ));
    }

    #[test]
    fn disjoint_union_of_unknots() {
        let u = Shadow::unknot();
        assert_eq!(u.disjoint_union(&u).state_sum().unwrap(), p(&[0, 0, 1]));
        let t1 = twist_loop_1();
        assert_eq!(t1.disjoint_union(&u).state_sum().unwrap(), p(&[0, 0, 1, 1]));
    }

    #[test]
    fn connected_sum_with_unknot_is_identity() {
        let t1 = twist_loop_1();
        let u = Shadow::unknot();
        let s = t1
            .connected_sum(t1.exit_arc().unwrap(), &u, u.entry_arc().unwrap())
            .unwrap();
        assert_eq!(s.state_sum().unwrap(), t1.state_sum().unwrap());
        let s2 = u
            .connected_sum(u.exit_arc().unwrap(), &t1, t1.entry_arc().unwrap())
            .unwrap();
        assert_eq!(s2.state_sum().unwrap(), t1.state_sum().unwrap());
    }

    #[test]
    fn connected_sum_of_twists_gives_two_twist_loop() {
        let t1 = twist_loop_1();
        let t2 = t1
            .connected_sum(t1.exit_arc().unwrap(), &t1, t1.entry_arc().unwrap())
            .unwrap();
        assert_eq!(t2.crossings(), 2);
        assert_eq!(t2.state_sum().unwrap(), p(&[0, 1, 2, 1]));
    }

    #[test]
    fn closure_of_unknot_gives_two_loops() {
        let u = Shadow::unknot();
        let closed = u
            .self_closure(u.entry_arc().unwrap(), u.exit_arc().unwrap())
            .unwrap();
        assert_eq!(closed.free_loops(), 2);
        assert_eq!(closed.state_sum().unwrap(), p(&[0, 0, 1]));
    }

    #[test]
    fn closure_of_twist_loop_is_one_foil() {
        let t1 = twist_loop_1();
        let closed = t1
            .self_closure(t1.entry_arc().unwrap(), t1.exit_arc().unwrap())
            .unwrap();
        assert_eq!(closed.crossings(), 1);
        assert_eq!(closed.state_sum().unwrap(), p(&[0, 1, 1]));
    }

    #[test]
    fn closure_on_a_single_arc_disjoins_an_unknot() {
        let t1 = twist_loop_1();
        let closed = t1
            .self_closure(ArcRef::edge(0, 0), ArcRef::edge(0, 1))
            .unwrap();
        assert_eq!(closed.free_loops(), 1);
        assert_eq!(
            closed.state_sum().unwrap(),
            t1.state_sum().unwrap().shift_up()
        );
    }

    #[test]
    fn same_position_cut_is_rejected() {
        let t1 = twist_loop_1();
        assert_eq!(
            t1.self_closure(ArcRef::edge(0, 0), ArcRef::edge(0, 0)),
            Err(DiagramError::InvalidCut)
        );
    }

    #[test]
    fn validate_flags_unmatched_ports() {
        let bad = Shadow::from_parts(1, vec![(0, 1), (2, 2)], 0, vec![]);
        assert!(bad.is_err());
    }

    #[test]
    fn validate_reports_components() {
        let u = Shadow::unknot();
        let report = u.validate();
        assert!(report.valid);
        assert_eq!(report.graph_components, 1);
    }

    #[test]
    fn text_round_trip() {
        let t1 = twist_loop_1();
        let t2 = t1
            .connected_sum(t1.exit_arc().unwrap(), &t1, t1.entry_arc().unwrap())
            .unwrap();
        for shadow in [Shadow::unknot(), t1, t2] {
            let text = shadow.to_text();
            let back = Shadow::from_text(&text).unwrap();
            assert_eq!(back, shadow);
            assert_eq!(back.to_text(), text);
        }
    }

    #[test]
    fn text_format_is_stable() {
        let t1 = twist_loop_1();
        assert_eq!(
            t1.to_text(),
            "loops: 0\ncuts: 0:0,1:1\n0: 0.3 0.2 0.1 0.0\n"
        );
        assert_eq!(
            Shadow::unknot().to_text(),
            "loops: 1\ncuts: loop0:0,loop0:1\n"
        );
    }

    #[test]
    fn text_rejects_asymmetric_tables() {
        let text = "loops: 0\ncuts:\n0: 0.1 0.0 0.3 0.1\n";
        assert!(Shadow::from_text(text).is_err());
    }

    #[test]
    fn chunked_counts_match_single_pass() {
        let t1 = twist_loop_1();
        let t2 = t1
            .connected_sum(t1.exit_arc().unwrap(), &t1, t1.entry_arc().unwrap())
            .unwrap();
        let full = t2.state_circle_counts(0..4);
        let mut merged = t2.state_circle_counts(0..2);
        for (m, c) in merged.iter_mut().zip(t2.state_circle_counts(2..4)) {
            *m += c;
        }
        assert_eq!(full, merged);
    }
}
