pub mod error;
pub mod fixtures;
pub mod lexer;
pub mod parser;
pub mod print;
pub mod rewrite;
pub mod sort;
pub mod subst;
pub mod term;
pub mod analysis;
pub mod theory;
pub mod unify;
pub mod variant;

pub use error::{Error, Result};
pub use parser::{parse_module, parse_modules, parse_query, parse_term, QueryPattern};
pub use sort::{SortGraph, SortRef};
pub use subst::Substitution;
pub use term::{OpId, Position, Term, Var, VarClass};
pub use theory::{Equation, Theory};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    struct Readme;

    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;

    #[doc = include_str!("../../../book/src/terms.md")]
    struct Terms;

    #[doc = include_str!("../../../book/src/unification.md")]
    struct Unification;

    #[doc = include_str!("../../../book/src/rewriting.md")]
    struct Rewriting;

    #[doc = include_str!("../../../book/src/variants.md")]
    struct Variants;

    #[doc = include_str!("../../../book/src/fvp.md")]
    struct Fvp;

    #[doc = include_str!("../../../book/src/embedding.md")]
    struct Embedding;

    #[doc = include_str!("../../../book/src/inspecting.md")]
    struct Inspecting;

    #[doc = include_str!("../../../book/src/export.md")]
    struct Export;

    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;

    #[doc = include_str!("../../../book/src/service.md")]
    struct Service;
}
