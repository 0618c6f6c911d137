use std::sync::Arc;

use super::{Variant, VariantTree};
use crate::error::Result;
use crate::term::Term;
use crate::theory::Theory;

/// Variants of `t` in breadth-first order, at most `bound` of them.
pub fn get_variants(th: &Theory, t: &Term, bound: Option<usize>) -> Result<Vec<Variant>> {
    let stream = VariantStream::new(Arc::new(th.clone()), t)?;
    match bound {
        Some(n) => stream.take(n).collect(),
        None => stream.collect(),
    }
}

/// Incremental variant enumeration; expands the tree only as far as needed
/// to deliver the next variant.
pub struct VariantStream {
    tree: VariantTree,
    next: usize,
    failed: bool,
}

impl VariantStream {
    pub fn new(th: Arc<Theory>, t: &Term) -> Result<Self> {
        Ok(VariantStream { tree: VariantTree::new(th, t)?, next: 0, failed: false })
    }

    pub fn tree(&self) -> &VariantTree {
        &self.tree
    }

    pub fn into_tree(self) -> VariantTree {
        self.tree
    }
}

impl Iterator for VariantStream {
    type Item = Result<Variant>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        while self.next >= self.tree.len() {
            let id = self.tree.frontier().next()?;
            if let Err(e) = self.tree.expand_node(id) {
                self.failed = true;
                return Some(Err(e));
            }
        }
        let v = self.tree.variant(self.next);
        self.next += 1;
        Some(Ok(v))
    }
}
