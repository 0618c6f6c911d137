//! The example theories shipped with the crate.

use crate::parser::parse_module;
use crate::theory::Theory;

pub const NAT_VARIANT: &str = include_str!("../fixtures/nat-variant.maude");
pub const BOOL: &str = include_str!("../fixtures/bool.maude");
pub const EXCLUSIVE_OR: &str = include_str!("../fixtures/xor.maude");
pub const EXCLUSIVE_OR_NOFVP: &str = include_str!("../fixtures/xor-nofvp.maude");
pub const EXCLUSIVE_OR_ACU: &str = include_str!("../fixtures/xor-acu.maude");
pub const ASSOC_SET: &str = include_str!("../fixtures/assoc-set.maude");
pub const EMBED: &str = include_str!("../fixtures/embed.maude");

/// `(file name, module text)` for every shipped theory.
pub const ALL: &[(&str, &str)] = &[
    ("nat-variant.maude", NAT_VARIANT),
    ("bool.maude", BOOL),
    ("xor.maude", EXCLUSIVE_OR),
    ("xor-nofvp.maude", EXCLUSIVE_OR_NOFVP),
    ("xor-acu.maude", EXCLUSIVE_OR_ACU),
    ("assoc-set.maude", ASSOC_SET),
    ("embed.maude", EMBED),
];

fn load(text: &str) -> Theory {
    parse_module(text).expect("shipped fixture parses")
}

pub fn nat_variant() -> Theory {
    load(NAT_VARIANT)
}

pub fn boolean() -> Theory {
    load(BOOL)
}

pub fn exclusive_or() -> Theory {
    load(EXCLUSIVE_OR)
}

pub fn exclusive_or_nofvp() -> Theory {
    load(EXCLUSIVE_OR_NOFVP)
}

pub fn exclusive_or_acu() -> Theory {
    load(EXCLUSIVE_OR_ACU)
}

pub fn assoc_set() -> Theory {
    load(ASSOC_SET)
}

pub fn embedding_signature() -> Theory {
    load(EMBED)
}
