//! Canonical shadow diagrams for each knot family.
//!
//! Every open family is a chain of copies of a fixed 2-strand generator
//! tangle, capped at both ends; the matching closure family reconnects the
//! two end caps into a ring via [`Shadow::self_closure`]. The generator port
//! tables below are frozen as the canonical representatives of their
//! equivalence classes.
//!
//! Tangle boundary convention: `west = (south-in, north-in)` and
//! `east = (south-out, north-out)`. Chains bridge south to south and north to
//! north, caps join the two ports on one side, and the ring closure joins
//! south-in to south-out and north-in to north-out.

use crate::diagram::{ArcRef, DiagramError, Port, Shadow};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("unknown family name `{0}`")]
    UnknownFamily(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// The implemented knot families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Unknot,
    TwistLoop,
    Link,
    TwistLink,
    Hitch,
    Overhand,
    Foil,
    ChainLink,
    TwistBracelet,
    Ringbolt,
    Sinnet,
    TwistKnot,
    AltA,
    AltB,
    AltC,
    AltD,
    AltE,
}

impl Family {
    /// Catalog order, used everywhere output order matters.
    pub const ALL: [Family; 17] = [
        Family::Unknot,
        Family::TwistLoop,
        Family::Link,
        Family::TwistLink,
        Family::Hitch,
        Family::Overhand,
        Family::Foil,
        Family::ChainLink,
        Family::TwistBracelet,
        Family::Ringbolt,
        Family::Sinnet,
        Family::TwistKnot,
        Family::AltA,
        Family::AltB,
        Family::AltC,
        Family::AltD,
        Family::AltE,
    ];

    /// Stable CLI-facing name.
    pub fn name(self) -> &'static str {
        match self {
            Family::Unknot => "unknot",
            Family::TwistLoop => "twist-loop",
            Family::Link => "link",
            Family::TwistLink => "twist-link",
            Family::Hitch => "hitch",
            Family::Overhand => "overhand",
            Family::Foil => "foil",
            Family::ChainLink => "chain-link",
            Family::TwistBracelet => "twist-bracelet",
            Family::Ringbolt => "ringbolt",
            Family::Sinnet => "sinnet",
            Family::TwistKnot => "twist-knot",
            Family::AltA => "alt-a",
            Family::AltB => "alt-b",
            Family::AltC => "alt-c",
            Family::AltD => "alt-d",
            Family::AltE => "alt-e",
        }
    }

    pub fn parse(name: &str) -> Result<Family, FamilyError> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == name)
            .ok_or_else(|| FamilyError::UnknownFamily(name.to_string()))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One family member: a family tag and its index `n >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FamilySpec {
    pub family: Family,
    pub n: usize,
}

impl FamilySpec {
    pub fn new(family: Family, n: usize) -> Self {
        FamilySpec { family, n }
    }
}

/// Crossing count of the canonical diagram, as a fixed function of `(family, n)`.
pub fn crossing_count(spec: FamilySpec) -> usize {
    let n = spec.n;
    match spec.family {
        Family::Unknot => 0,
        Family::TwistLoop | Family::Foil => n,
        Family::Link | Family::ChainLink | Family::AltA => 2 * n,
        Family::TwistLink
        | Family::Hitch
        | Family::Overhand
        | Family::TwistBracelet
        | Family::Ringbolt
        | Family::Sinnet
        | Family::AltB
        | Family::AltC
        | Family::AltD
        | Family::AltE => 3 * n,
        Family::TwistKnot => n + 2,
    }
}

/// A 2-strand tangle: crossings, internal edges, and the four boundary ports.
struct Tangle {
    crossings: usize,
    edges: Vec<(Port, Port)>,
    west: (Port, Port),
    east: (Port, Port),
}

/// Half-twist generator (one crossing).
fn tangle_twist() -> Tangle {
    Tangle {
        crossings: 1,
        edges: vec![],
        west: (0, 3),
        east: (1, 2),
    }
}

/// Hopf clasp generator (two crossings, two interlocking circles).
fn tangle_hopf() -> Tangle {
    Tangle {
        crossings: 2,
        edges: vec![(2, 4), (3, 5)],
        west: (0, 6),
        east: (1, 7),
    }
}

/// Twist-link generator: the Hopf clasp followed by a half twist.
fn tangle_twist_link() -> Tangle {
    Tangle {
        crossings: 3,
        edges: vec![(2, 4), (3, 5), (1, 8), (7, 11)],
        west: (0, 6),
        east: (9, 10),
    }
}

/// Half-hitch generator: the twist-link tangle turned a quarter turn, so its
/// pass and turnback roles swap. Distinct port table from the overhand
/// generator on purpose; the two must agree on every polynomial.
fn tangle_hitch() -> Tangle {
    Tangle {
        crossings: 3,
        edges: vec![(2, 4), (3, 5), (1, 8), (7, 11)],
        west: (6, 10),
        east: (0, 9),
    }
}

/// Overhand-knot generator: three stacked half twists turned a quarter turn.
fn tangle_overhand() -> Tangle {
    Tangle {
        crossings: 3,
        edges: vec![(1, 4), (2, 7), (5, 8), (6, 11)],
        west: (3, 10),
        east: (0, 9),
    }
}

/// `n` copies of the generator in series, south-to-south, north-to-north.
fn chain(generator: fn() -> Tangle, n: usize) -> Option<Tangle> {
    if n == 0 {
        return None;
    }
    let g = generator();
    let stride = 4 * g.crossings as Port;
    let mut edges = Vec::new();
    for i in 0..n as Port {
        let off = stride * i;
        edges.extend(g.edges.iter().map(|&(a, b)| (a + off, b + off)));
        if i > 0 {
            let prev = off - stride;
            edges.push((g.east.0 + prev, g.west.0 + off));
            edges.push((g.east.1 + prev, g.west.1 + off));
        }
    }
    let last = stride * (n as Port - 1);
    Some(Tangle {
        crossings: g.crossings * n,
        edges,
        west: g.west,
        east: (g.east.0 + last, g.east.1 + last),
    })
}

/// Caps a tangle on both sides, producing the open chain knot. The two caps
/// become the canonical entry and exit arcs.
fn cap(tangle: Option<Tangle>) -> Shadow {
    let Some(t) = tangle else {
        return Shadow::unknot();
    };
    let west_cap = t.west;
    let east_cap = t.east;
    let mut edges = t.edges;
    edges.push(west_cap);
    edges.push(east_cap);
    let shadow = Shadow::from_parts(t.crossings, edges, 0, vec![]).expect("frozen table");
    let find = |pair: (Port, Port)| {
        shadow
            .edges()
            .iter()
            .position(|&e| e == (pair.0.min(pair.1), pair.0.max(pair.1)))
            .expect("cap edge")
    };
    let cuts = vec![
        ArcRef::edge(find(west_cap), 0),
        ArcRef::edge(find(east_cap), 1),
    ];
    shadow.with_cut_points(cuts).expect("cap cuts")
}

fn open_chain(generator: fn() -> Tangle, n: usize) -> Shadow {
    cap(chain(generator, n))
}

/// Closure family: close the open chain at its canonical end cuts.
fn closed_chain(generator: fn() -> Tangle, n: usize) -> Result<Shadow, DiagramError> {
    let open = open_chain(generator, n);
    open.self_closure(open.entry_arc()?, open.exit_arc()?)
}

/// Builds the canonical shadow diagram for a family member.
pub fn build(spec: FamilySpec) -> Result<Shadow, FamilyError> {
    let n = spec.n;
    let shadow = match spec.family {
        Family::Unknot => Shadow::unknot(),
        Family::TwistLoop => open_chain(tangle_twist, n),
        Family::Link => open_chain(tangle_hopf, n),
        Family::TwistLink => open_chain(tangle_twist_link, n),
        Family::Hitch => open_chain(tangle_hitch, n),
        Family::Overhand => open_chain(tangle_overhand, n),
        Family::Foil => closed_chain(tangle_twist, n)?,
        Family::ChainLink => closed_chain(tangle_hopf, n)?,
        Family::TwistBracelet => closed_chain(tangle_twist_link, n)?,
        Family::Ringbolt => closed_chain(tangle_hitch, n)?,
        Family::Sinnet => closed_chain(tangle_overhand, n)?,
        Family::TwistKnot => {
            // closure of the connected sum of the Hopf link and the n-twist loop
            let hopf = open_chain(tangle_hopf, 1);
            let twists = open_chain(tangle_twist, n);
            let joined = hopf.connected_sum(hopf.exit_arc()?, &twists, twists.entry_arc()?)?;
            joined.self_closure(joined.entry_arc()?, joined.exit_arc()?)?
        }
        Family::AltA => alt_sum(closed_chain(tangle_twist, n)?, open_chain(tangle_twist, n))?,
        Family::AltB => alt_sum(
            closed_chain(tangle_twist, 2 * n)?,
            open_chain(tangle_twist, n),
        )?,
        Family::AltC => alt_sum(
            closed_chain(tangle_twist, n)?,
            open_chain(tangle_twist, 2 * n),
        )?,
        Family::AltD => alt_sum(closed_chain(tangle_hopf, n)?, open_chain(tangle_twist, n))?,
        Family::AltE => alt_sum(closed_chain(tangle_twist, n)?, open_chain(tangle_hopf, n))?,
    };
    Ok(shadow)
}

/// Alternative closures: hang an open chain off a closed one at its wrap arc.
fn alt_sum(closed: Shadow, open: Shadow) -> Result<Shadow, DiagramError> {
    closed.connected_sum(closed.exit_arc()?, &open, open.entry_arc()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Polynomial;

    fn poly(family: Family, n: usize) -> Polynomial {
        build(FamilySpec::new(family, n))
            .unwrap()
            .state_sum()
            .unwrap()
    }

    fn p(coeffs: &[i64]) -> Polynomial {
        Polynomial::from_ints(coeffs)
    }

    #[test]
    fn crossing_count_table() {
        assert_eq!(crossing_count(FamilySpec::new(Family::TwistLink, 4)), 12);
        assert_eq!(crossing_count(FamilySpec::new(Family::Unknot, 0)), 0);
        assert_eq!(crossing_count(FamilySpec::new(Family::TwistKnot, 3)), 5);
        assert_eq!(crossing_count(FamilySpec::new(Family::AltD, 2)), 6);
    }

    #[test]
    fn built_diagrams_match_declared_crossing_counts() {
        for family in Family::ALL {
            for n in 0..=2 {
                let spec = FamilySpec::new(family, n);
                let shadow = build(spec).unwrap();
                assert_eq!(shadow.crossings(), crossing_count(spec), "{family} n={n}");
                assert!(shadow.validate().valid, "{family} n={n}");
            }
        }
    }

    #[test]
    fn zeroth_members() {
        assert_eq!(poly(Family::TwistLoop, 0), Polynomial::x());
        assert_eq!(poly(Family::Foil, 0), p(&[0, 0, 1]));
        assert_eq!(poly(Family::AltE, 0), p(&[0, 0, 1]));
    }

    #[test]
    fn figure_polynomials_of_the_generators() {
        assert_eq!(poly(Family::TwistLoop, 1), p(&[0, 1, 1]));
        assert_eq!(poly(Family::Link, 1), p(&[0, 2, 2]));
        assert_eq!(poly(Family::TwistLink, 1), p(&[0, 2, 4, 2]));
        assert_eq!(poly(Family::Hitch, 1), p(&[0, 3, 4, 1]));
        assert_eq!(poly(Family::Overhand, 1), p(&[0, 3, 4, 1]));
    }

    #[test]
    fn figure_polynomials_of_the_closures() {
        assert_eq!(poly(Family::Foil, 1), p(&[0, 1, 1]));
        assert_eq!(poly(Family::ChainLink, 1), p(&[0, 1, 2, 1]));
        assert_eq!(poly(Family::TwistBracelet, 1), p(&[0, 3, 4, 1]));
        assert_eq!(poly(Family::Ringbolt, 1), p(&[0, 2, 4, 2]));
        assert_eq!(poly(Family::Sinnet, 1), p(&[0, 1, 3, 3, 1]));
    }

    #[test]
    fn foil_two_expands_as_stated() {
        assert_eq!(poly(Family::Foil, 2), p(&[0, 2, 2]));
    }

    #[test]
    fn twist_knot_small_members() {
        assert_eq!(poly(Family::TwistKnot, 0), p(&[0, 1, 2, 1]));
        assert_eq!(poly(Family::TwistKnot, 1), p(&[0, 3, 4, 1]));
    }

    #[test]
    fn hitch_and_overhand_are_distinct_diagrams_with_equal_polynomials() {
        let h = build(FamilySpec::new(Family::Hitch, 1)).unwrap();
        let o = build(FamilySpec::new(Family::Overhand, 1)).unwrap();
        assert_ne!(h.edges(), o.edges());
        assert_eq!(h.state_sum().unwrap(), o.state_sum().unwrap());
    }

    #[test]
    fn one_hitch_state_multiset() {
        use crate::diagram::StateAssignment;
        let h = build(FamilySpec::new(Family::Hitch, 1)).unwrap();
        let mut circles: Vec<usize> = (0..8)
            .map(|bits| h.resolve_state(&StateAssignment::new(bits, 3)).unwrap())
            .collect();
        circles.sort_unstable();
        assert_eq!(circles, vec![1, 1, 1, 2, 2, 2, 2, 3]);
    }

    #[test]
    fn surgery_on_generators_matches_composition_laws() {
        let t1 = build(FamilySpec::new(Family::TwistLoop, 1)).unwrap();
        let l1 = build(FamilySpec::new(Family::Link, 1)).unwrap();
        // T_1 | L_1 multiplies the state sums
        assert_eq!(
            t1.disjoint_union(&l1).state_sum().unwrap(),
            p(&[0, 0, 2, 4, 2])
        );
        // L_1 # T_1 is the 1-twist link
        let w1 = l1
            .connected_sum(l1.exit_arc().unwrap(), &t1, t1.entry_arc().unwrap())
            .unwrap();
        assert_eq!(w1.state_sum().unwrap(), p(&[0, 2, 4, 2]));
    }

    #[test]
    fn links_scale_twist_loops_by_powers_of_two() {
        for n in 0..=4 {
            let l = poly(Family::Link, n);
            let t = poly(Family::TwistLoop, n);
            let scale = Polynomial::constant(1i64 << n);
            assert_eq!(l, &t * &scale);
        }
    }

    #[test]
    fn chain_families_compose_via_public_connected_sum() {
        let t1 = build(FamilySpec::new(Family::TwistLoop, 1)).unwrap();
        let mut acc = t1.clone();
        for _ in 1..3 {
            acc = acc
                .connected_sum(acc.exit_arc().unwrap(), &t1, t1.entry_arc().unwrap())
                .unwrap();
        }
        let direct = build(FamilySpec::new(Family::TwistLoop, 3)).unwrap();
        assert_eq!(acc, direct);
    }

    #[test]
    fn builder_output_validates() {
        let l3 = build(FamilySpec::new(Family::Link, 3)).unwrap();
        let report = l3.validate();
        assert!(report.valid);
        assert_eq!(report.crossings, 6);
        assert_eq!(report.graph_components, 1);
    }

    #[test]
    fn family_names_round_trip() {
        for family in Family::ALL {
            assert_eq!(Family::parse(family.name()).unwrap(), family);
        }
        assert!(Family::parse("granny").is_err());
    }
}
