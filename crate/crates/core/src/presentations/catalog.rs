use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use super::{parse_catalog_file, Presentation, PresentationError};

const CATALOG_TEXT: &str = include_str!("../../data/catalog.grp");

/// Keys of the built-in group catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CatalogKey {
    /// PSL(2, Z[ω]).
    Gamma,
    /// PGL(2, Z[ω]).
    Gamma0,
    /// Reflection group of the tetrahedron T[3,2,2;6,2,3].
    Lambda0,
    /// Reflection group of the tetrahedron T[3,2,2;3,3,3].
    Lambda1,
    /// Third index-2 subgroup of Lambda0.
    Lambda2,
    /// Fundamental group of the Weeks manifold.
    GammaW,
    /// Gamma × Z/2.
    GammaXC2,
    /// Gamma0 × Z/2.
    Gamma0XC2,
}

impl CatalogKey {
    pub const ALL: [CatalogKey; 8] = [
        CatalogKey::Gamma,
        CatalogKey::Gamma0,
        CatalogKey::Lambda0,
        CatalogKey::Lambda1,
        CatalogKey::Lambda2,
        CatalogKey::GammaW,
        CatalogKey::GammaXC2,
        CatalogKey::Gamma0XC2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CatalogKey::Gamma => "Gamma",
            CatalogKey::Gamma0 => "Gamma0",
            CatalogKey::Lambda0 => "Lambda0",
            CatalogKey::Lambda1 => "Lambda1",
            CatalogKey::Lambda2 => "Lambda2",
            CatalogKey::GammaW => "GammaW",
            CatalogKey::GammaXC2 => "GammaXC2",
            CatalogKey::Gamma0XC2 => "Gamma0XC2",
        }
    }
}

impl fmt::Display for CatalogKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CatalogKey {
    type Err = PresentationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CatalogKey::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| PresentationError::UnknownCatalogKey(s.to_string()))
    }
}

#[derive(Clone, Debug)]
pub struct GroupCatalogEntry {
    pub key: CatalogKey,
    pub presentation: Presentation,
}

pub fn catalog_entries() -> &'static [GroupCatalogEntry] {
    static ENTRIES: OnceLock<Vec<GroupCatalogEntry>> = OnceLock::new();
    ENTRIES.get_or_init(|| {
        let parsed = parse_catalog_file(CATALOG_TEXT).expect("built-in catalog parses");
        let entries: Vec<GroupCatalogEntry> = parsed
            .into_iter()
            .map(|(name, presentation)| GroupCatalogEntry {
                key: name.parse().expect("built-in catalog key"),
                presentation,
            })
            .collect();
        assert_eq!(entries.len(), CatalogKey::ALL.len());
        entries
    })
}

pub fn catalog(key: CatalogKey) -> &'static Presentation {
    &catalog_entries()
        .iter()
        .find(|e| e.key == key)
        .expect("every key has an entry")
        .presentation
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::parse_presentation;

    #[test]
    fn shapes() {
        let shape = |k| {
            let p = catalog(k);
            (p.n_generators(), p.relators().len())
        };
        assert_eq!(shape(CatalogKey::Gamma), (3, 6));
        assert_eq!(shape(CatalogKey::Lambda0), (4, 10));
        assert_eq!(shape(CatalogKey::GammaW), (2, 2));
        assert_eq!(shape(CatalogKey::Gamma0), (3, 6));
        assert_eq!(shape(CatalogKey::Lambda1), (4, 10));
        assert_eq!(shape(CatalogKey::Lambda2), (3, 6));
        assert_eq!(shape(CatalogKey::GammaXC2), (4, 10));
        assert_eq!(shape(CatalogKey::Gamma0XC2), (4, 10));
    }

    #[test]
    fn render_round_trip() {
        for e in catalog_entries() {
            let again = parse_presentation(&e.presentation.to_string()).unwrap();
            assert_eq!(again, e.presentation, "{}", e.key);
        }
    }

    #[test]
    fn unknown_key() {
        assert!("Delta".parse::<CatalogKey>().is_err());
        assert_eq!("gammaw".parse::<CatalogKey>().unwrap(), CatalogKey::GammaW);
    }
}
