//! Weakly effective ω-continuous domains at desk scale: explicit finite
//! posets with the way-below relation, stage approximations of it, the
//! element-approximation recursion, Scott opens, and the conversion to
//! modular spaces.
//!
//! On a finite poset every directed set has a maximum, so way-below
//! coincides with the order itself; the fixtures adopt this and the
//! interpolation property is satisfiable with `x = y`.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

use crate::nat::{unpair, Nat};
use crate::numberings::CeSet;
use crate::spaces::{BasisNumbering, EffOpenSet, GFn, ModularWitness, Space, SpaceTier};

/// An explicit finite domain basis: a partial order with least element at
/// position 0. The basis numbering is cyclic over the listed order, so every
/// natural is a valid basis index and `beta(0)` is bottom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainBasis {
    labels: Vec<String>,
    /// `leq[i][j]` iff element i <= element j.
    leq: Vec<Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DomainError {
    #[error("domain must have at least one element")]
    Empty,
    #[error("leq is not reflexive at {0}")]
    NotReflexive(usize),
    #[error("leq is not antisymmetric on ({0}, {1})")]
    NotAntisymmetric(usize, usize),
    #[error("leq is not transitive on ({0}, {1}, {2})")]
    NotTransitive(usize, usize, usize),
    #[error("element 0 is not the least element (not below {0})")]
    NoBottom(usize),
    #[error("interpolation precondition fails: {m} is not way-below {y}")]
    NotWayBelow { m: Nat, y: Nat },
}

impl DomainBasis {
    #[allow(clippy::needless_range_loop)]
    pub fn new(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self, DomainError> {
        if labels.is_empty() {
            return Err(DomainError::Empty);
        }
        let n = labels.len();
        let mut leq = vec![vec![false; n]; n];
        for i in 0..n {
            leq[i][i] = true;
        }
        for &(a, b) in pairs {
            leq[a][b] = true;
        }
        // transitive closure
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if leq[i][k] && leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(DomainError::NotAntisymmetric(i, j));
                }
            }
        }
        for j in 0..n {
            if !leq[0][j] {
                return Err(DomainError::NoBottom(j));
            }
        }
        Ok(DomainBasis { labels, leq })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Element at a basis index (cyclic numbering).
    pub fn beta(&self, n: Nat) -> usize {
        (n % self.len() as Nat) as usize
    }

    pub fn elem_leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    /// Way-below on basis indices; on a finite poset this is the order.
    pub fn way_below(&self, i: Nat, j: Nat) -> bool {
        self.leq[self.beta(i)][self.beta(j)]
    }

    /// The stage-`t` approximation of way-below: the clamp of the relation
    /// to indices `<= t`. A presentation: monotone, exhaustive, and each
    /// stage is transitive (the clamp of a transitive relation is).
    pub fn way_below_stage(&self, t: Nat, i: Nat, j: Nat) -> bool {
        i <= t && j <= t && self.way_below(i, j)
    }

    /// The upper set `{x : beta(n) ≪ x}` as element ids.
    pub fn scott_open(&self, n: Nat) -> BTreeSet<usize> {
        let b = self.beta(n);
        (0..self.len()).filter(|&x| self.leq[b][x]).collect()
    }
}

/// Stage approximations of an arbitrary c.e. way-below presentation: the
/// transitive closure of the raw pairs seen so far, clamped to `{0..s}^2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WayBelowApprox {
    pub raw: CeSet,
}

impl WayBelowApprox {
    pub fn new(raw: CeSet) -> Self {
        WayBelowApprox { raw }
    }

    /// `A_s`: pairs of the stage-s transitive closure with entries <= s.
    pub fn stage(&self, s: Nat) -> BTreeSet<(Nat, Nat)> {
        let pairs: Vec<(Nat, Nat)> = self.raw.stage(s).iter().map(|&c| unpair(c)).collect();
        let mut nodes: BTreeSet<Nat> = BTreeSet::new();
        for &(a, b) in &pairs {
            nodes.insert(a);
            nodes.insert(b);
        }
        let nodes: Vec<Nat> = nodes.into_iter().collect();
        let mut closed: BTreeSet<(Nat, Nat)> = pairs.iter().copied().collect();
        // Floyd-Warshall over the mentioned nodes
        for &k in &nodes {
            for &i in &nodes {
                for &j in &nodes {
                    if closed.contains(&(i, k)) && closed.contains(&(k, j)) {
                        closed.insert((i, j));
                    }
                }
            }
        }
        closed
            .into_iter()
            .filter(|&(a, b)| a <= s && b <= s)
            .collect()
    }
}

/// Finds a basis index `x` with `M ≪ x ≪ y` (on explicit fixtures `x = y`
/// is admissible since way-below is reflexive there). Deterministic: the
/// least such index within one numbering period.
pub fn interpolate(domain: &DomainBasis, m: &BTreeSet<Nat>, y: Nat) -> Result<Nat, DomainError> {
    for &mm in m {
        if !domain.way_below(mm, y) {
            return Err(DomainError::NotWayBelow { m: mm, y });
        }
    }
    let period = domain.len() as Nat;
    (0..period)
        .find(|&x| m.iter().all(|&mm| domain.way_below(mm, x)) && domain.way_below(x, y))
        .ok_or(DomainError::NotWayBelow { m: 0, y })
}

/// The element-approximation chain: per stage, the candidate marker `h`
/// (`None` is the "no candidate" sentinel) and the current index `g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementApprox {
    pub chain: Vec<(Option<Nat>, Nat)>,
}

impl ElementApprox {
    /// The final index of the chain.
    pub fn limit_index(&self) -> Nat {
        self.chain.last().map(|&(_, g)| g).unwrap_or(0)
    }
}

/// Runs the two-case stage recursion approximating an element from a c.e.
/// set of basis indices: `h` picks the minimal not-yet-dominated member,
/// `g` advances to the minimal member dominating both the current value and
/// the marker, else stalls.
pub fn alpha_c(domain: &DomainBasis, input: &CeSet, stages: Nat) -> ElementApprox {
    let mut chain = vec![(Some(0), 0u64)];
    let mut g: Nat = 0;
    for s in 0..stages {
        let t = s + 1;
        let w = input.stage(t);
        let h = w
            .iter()
            .copied()
            .find(|&n| !domain.way_below_stage(t, n, g));
        let mut g_next = g;
        if let Some(k) = h {
            if let Some(b) = w.iter().copied().find(|&x| {
                x > 0 && domain.way_below_stage(t, g, x) && domain.way_below_stage(t, k, x)
            }) {
                g_next = b;
            }
        }
        chain.push((h, g_next));
        g = g_next;
    }
    ElementApprox { chain }
}

/// Converts an explicit domain into a modular space: `α(0) = ∅`,
/// `α(n) = U_n` for `n >= 1`, with the witness `b_n = β(n)`, `O_n = U_n`.
/// The cyclic basis numbering puts bottom's Scott open (the whole space) at
/// index `len`, so the basic opens cover the space.
pub fn domain_to_modular(domain: &DomainBasis) -> (Space, ModularWitness) {
    let m = domain.len() as Nat;
    let mut table: BTreeMap<Nat, BTreeSet<usize>> = BTreeMap::new();
    for n in 1..=m {
        table.insert(n, domain.scott_open(n));
    }
    // g: upper bounds of both arguments, padded by the empty index 0
    let mut lists: BTreeMap<(Nat, Nat), Vec<Nat>> = BTreeMap::new();
    for i in 0..=m {
        for j in 0..=m {
            if i == 0 || j == 0 {
                lists.insert((i, j), vec![0]);
                continue;
            }
            let uppers: Vec<Nat> = (1..=m)
                .filter(|&k| domain.way_below(i, k) && domain.way_below(j, k))
                .collect();
            lists.insert((i, j), if uppers.is_empty() { vec![0] } else { uppers });
        }
    }
    let space = Space {
        name: "D_scott".into(),
        tier: SpaceTier::ExplicitFinite,
        points: domain.labels().to_vec(),
        basis: BasisNumbering::from_table(table, 0),
        g: GFn::precomputed(lists, 0),
        nonempty: CeSet::Finite((1..=m).collect()),
        symbolic_membership: None,
        provenance: format!("from-domain({} elements)", domain.len()),
    };
    let witness = ModularWitness {
        b: (1..=m).map(|n| domain.beta(n)).collect(),
        o: (1..=m).map(|n| EffOpenSet::finite([n])).collect(),
    };
    (space, witness)
}

/// The approximation set of an element: basis indices way-below it, within
/// the first numbering period. Feeding this to [`alpha_c`] must recover the
/// element, which is the surjectivity half of the construction.
pub fn approx_set(domain: &DomainBasis, elem: usize) -> BTreeSet<Nat> {
    (0..domain.len() as Nat)
        .filter(|&n| domain.elem_leq(domain.beta(n), elem))
        .collect()
}
