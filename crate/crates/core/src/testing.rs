//! Shared fixtures for unit tests.

use std::sync::OnceLock;

use crate::group::{Group, GroupOptions, Presentation};

pub(crate) const SURFACE: &str = "generators: a b c d\nrelators: abABcdCD\nmode: dehn\n";

pub(crate) const F2XF2: &str = "generators: a b c d
relators: acAC adAD bcBC bdBD
mode: rewriting
rules:
  ca -> ac
  cA -> Ac
  cb -> bc
  cB -> Bc
  Ca -> aC
  CA -> AC
  Cb -> bC
  CB -> BC
  da -> ad
  dA -> Ad
  db -> bd
  dB -> Bd
  Da -> aD
  DA -> AD
  Db -> bD
  DB -> BD
";

/// Genus-2 surface group with a radius-6 word-problem ball.
pub(crate) fn surface() -> &'static Group {
    static G: OnceLock<Group> = OnceLock::new();
    G.get_or_init(|| {
        Group::new(
            Presentation::parse(SURFACE).unwrap(),
            GroupOptions {
                index_radius: 6,
                ..GroupOptions::default()
            },
        )
        .unwrap()
    })
}

pub(crate) fn f2() -> &'static Group {
    static G: OnceLock<Group> = OnceLock::new();
    G.get_or_init(|| Group::free(2))
}

/// `F(a, b) x F(c, d)` by a confluent commutation system.
pub(crate) fn f2xf2() -> &'static Group {
    static G: OnceLock<Group> = OnceLock::new();
    G.get_or_init(|| {
        Group::new(Presentation::parse(F2XF2).unwrap(), GroupOptions::default()).unwrap()
    })
}
