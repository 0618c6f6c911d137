//! Sorts, subsorts and kinds.
//!
//! Every sort belongs to exactly one kind: the connected component of the
//! subsort relation that contains it. Kinds are written `[S]` where `S` is
//! the first maximal sort of the component in declaration order.

use std::collections::HashMap;
use std::fmt;

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SortId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KindId(pub u32);

/// A proper sort or the kind at the top of a connected component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SortRef {
    Sort(SortId),
    Kind(KindId),
}

#[derive(Clone, Debug)]
pub struct Kind {
    pub sorts: Vec<SortId>,
    pub name: String,
}

#[derive(Clone, Debug, Default)]
pub struct SortGraph {
    names: Vec<String>,
    index: HashMap<String, SortId>,
    /// Declared pairs `(lower, upper)`.
    subsorts: Vec<(SortId, SortId)>,
    /// `leq[a][b]` holds when `a <= b` in the reflexive-transitive closure.
    leq: Vec<Vec<bool>>,
    kind_of: Vec<KindId>,
    kinds: Vec<Kind>,
}

impl SortGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a sort; redeclaring an existing name is a no-op.
    pub fn add_sort(&mut self, name: &str) -> SortId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = SortId(self.names.len() as u32);
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        id
    }

    pub fn add_subsort(&mut self, lower: SortId, upper: SortId) {
        if !self.subsorts.contains(&(lower, upper)) {
            self.subsorts.push((lower, upper));
        }
    }

    /// Computes the closure and the kind partition. Must be called after
    /// the last declaration and before any query.
    pub fn finalize(&mut self) -> Result<(), Error> {
        let n = self.names.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in &self.subsorts {
            leq[a.0 as usize][b.0 as usize] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::Signature(format!(
                        "subsort cycle between {} and {}",
                        self.names[i], self.names[j]
                    )));
                }
            }
        }
        self.leq = leq;

        // union-find over declared pairs
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let next = p[c];
                p[c] = r;
                c = next;
            }
            r
        }
        for &(a, b) in &self.subsorts {
            let ra = find(&mut parent, a.0 as usize);
            let rb = find(&mut parent, b.0 as usize);
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut root_to_kind: HashMap<usize, KindId> = HashMap::new();
        self.kinds.clear();
        self.kind_of = vec![KindId(0); n];
        for i in 0..n {
            let r = find(&mut parent, i);
            let kid = *root_to_kind.entry(r).or_insert_with(|| {
                self.kinds.push(Kind { sorts: Vec::new(), name: String::new() });
                KindId(self.kinds.len() as u32 - 1)
            });
            self.kinds[kid.0 as usize].sorts.push(SortId(i as u32));
            self.kind_of[i] = kid;
        }
        for kind in &mut self.kinds {
            let top = kind
                .sorts
                .iter()
                .copied()
                .find(|&s| {
                    kind.sorts
                        .iter()
                        .all(|&o| o == s || !self.leq[s.0 as usize][o.0 as usize])
                })
                .expect("a finite partial order has a maximal element");
            kind.name = self.names[top.0 as usize].clone();
        }
        Ok(())
    }

    pub fn lookup(&self, name: &str) -> Option<SortId> {
        self.index.get(name).copied()
    }

    /// Resolves `S` or `[S]`.
    pub fn resolve(&self, text: &str) -> Option<SortRef> {
        if let Some(inner) = text.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            let first = inner.split(',').next()?.trim();
            self.lookup(first).map(|s| SortRef::Kind(self.kind_of(s)))
        } else {
            self.lookup(text).map(SortRef::Sort)
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn sorts(&self) -> impl Iterator<Item = SortId> + '_ {
        (0..self.names.len() as u32).map(SortId)
    }

    pub fn subsort_pairs(&self) -> &[(SortId, SortId)] {
        &self.subsorts
    }

    pub fn name(&self, s: SortId) -> &str {
        &self.names[s.0 as usize]
    }

    pub fn kind_of(&self, s: SortId) -> KindId {
        self.kind_of[s.0 as usize]
    }

    pub fn kind(&self, k: KindId) -> &Kind {
        &self.kinds[k.0 as usize]
    }

    pub fn kind_of_ref(&self, s: SortRef) -> KindId {
        match s {
            SortRef::Sort(s) => self.kind_of(s),
            SortRef::Kind(k) => k,
        }
    }

    pub fn sort_leq(&self, a: SortId, b: SortId) -> bool {
        self.leq[a.0 as usize][b.0 as usize]
    }

    /// Order on sorts extended with kinds as top elements of their component.
    pub fn leq(&self, a: SortRef, b: SortRef) -> bool {
        match (a, b) {
            (SortRef::Sort(a), SortRef::Sort(b)) => self.sort_leq(a, b),
            (a, SortRef::Kind(k)) => self.kind_of_ref(a) == k,
            (SortRef::Kind(_), SortRef::Sort(_)) => false,
        }
    }

    /// All proper sorts below `s` (inclusive), followed by `s` itself when
    /// it is a kind. Ordered from the largest candidate downwards.
    pub fn lower_candidates(&self, s: SortRef) -> Vec<SortRef> {
        let mut out: Vec<SortRef> = match s {
            SortRef::Kind(k) => {
                let mut v = vec![SortRef::Kind(k)];
                v.extend(self.kind(k).sorts.iter().map(|&x| SortRef::Sort(x)));
                v
            }
            SortRef::Sort(top) => self
                .kind(self.kind_of(top))
                .sorts
                .iter()
                .filter(|&&x| self.sort_leq(x, top))
                .map(|&x| SortRef::Sort(x))
                .collect(),
        };
        // larger sorts first: count how many candidates sit below each
        out.sort_by_key(|&c| {
            std::cmp::Reverse(self.kind(self.kind_of_ref(c)).sorts.iter().filter(|&&x| self.leq(SortRef::Sort(x), c)).count())
        });
        out
    }

    pub fn display(&self, s: SortRef) -> SortDisplay<'_> {
        SortDisplay { graph: self, sort: s }
    }
}

pub struct SortDisplay<'a> {
    graph: &'a SortGraph,
    sort: SortRef,
}

impl fmt::Display for SortDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sort {
            SortRef::Sort(s) => f.write_str(self.graph.name(s)),
            SortRef::Kind(k) => write!(f, "[{}]", self.graph.kind(k).name),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn acu_sorts() -> SortGraph {
        let mut g = SortGraph::new();
        let nat = g.add_sort("Nat");
        let ne = g.add_sort("NeNatSet");
        let set = g.add_sort("NatSet");
        g.add_subsort(nat, ne);
        g.add_subsort(ne, set);
        g.finalize().unwrap();
        g
    }

    #[test]
    fn chain_closure_and_kind_name() {
        let g = acu_sorts();
        let nat = g.lookup("Nat").unwrap();
        let set = g.lookup("NatSet").unwrap();
        assert!(g.sort_leq(nat, set));
        assert!(!g.sort_leq(set, nat));
        assert_eq!(g.display(SortRef::Kind(g.kind_of(nat))).to_string(), "[NatSet]");
        assert_eq!(g.resolve("[Nat]"), Some(SortRef::Kind(g.kind_of(nat))));
    }

    #[test]
    fn kind_is_top() {
        let g = acu_sorts();
        let nat = SortRef::Sort(g.lookup("Nat").unwrap());
        let k = SortRef::Kind(g.kind_of(g.lookup("Nat").unwrap()));
        assert!(g.leq(nat, k));
        assert!(!g.leq(k, nat));
        assert_eq!(g.lower_candidates(k)[0], k);
        assert_eq!(g.lower_candidates(k).len(), 4);
    }

    #[test]
    fn cycle_rejected() {
        let mut g = SortGraph::new();
        let a = g.add_sort("A");
        let b = g.add_sort("B");
        g.add_subsort(a, b);
        g.add_subsort(b, a);
        assert!(g.finalize().is_err());
    }
}
