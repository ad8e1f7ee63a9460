//! Words, finitely presented groups, the presentation DSL and the built-in
//! group catalog.

mod catalog;
mod parse;
mod word;

use std::collections::HashSet;
use std::fmt;

pub use catalog::{catalog, catalog_entries, CatalogKey, GroupCatalogEntry};
pub use parse::{parse_catalog_file, parse_presentation};
pub use word::{Letter, Word};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate generator name {0:?}")]
    DuplicateGenerator(String),
    #[error("unknown symbol {name:?} at {line}:{column}")]
    UnknownSymbol {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("zero exponent at {line}:{column}")]
    ZeroExponent { line: usize, column: usize },
    #[error("invalid generator name {0:?}")]
    InvalidGeneratorName(String),
    #[error("relator uses generator index {index} but only {n_generators} generators exist")]
    GeneratorOutOfRange { index: usize, n_generators: usize },
    #[error("unknown catalog key {0:?}")]
    UnknownCatalogKey(String),
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A finite presentation: named generators and freely reduced relators.
///
/// Relators are stored freely reduced (not cyclically reduced); empty
/// relators are dropped on construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self, PresentationError> {
        let mut seen = HashSet::new();
        for name in &generators {
            if !is_identifier(name) {
                return Err(PresentationError::InvalidGeneratorName(name.clone()));
            }
            if !seen.insert(name.as_str()) {
                return Err(PresentationError::DuplicateGenerator(name.clone()));
            }
        }
        let n = generators.len();
        let mut reduced = Vec::with_capacity(relators.len());
        for r in relators {
            if let Some(index) = r.max_generator().filter(|&g| g >= n) {
                return Err(PresentationError::GeneratorOutOfRange {
                    index,
                    n_generators: n,
                });
            }
            let r = r.free_reduce();
            if !r.is_empty() {
                reduced.push(r);
            }
        }
        Ok(Presentation {
            generators,
            relators: reduced,
        })
    }

    /// Presentation with generators named `prefix0, prefix1, ...`.
    pub fn with_numbered_generators(
        prefix: &str,
        n_generators: usize,
        relators: Vec<Word>,
    ) -> Result<Self, PresentationError> {
        let names = (0..n_generators).map(|i| format!("{prefix}{i}")).collect();
        Presentation::new(names, relators)
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn n_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    /// Total length of all relators.
    pub fn relator_length(&self) -> usize {
        self.relators.iter().map(Word::len).sum()
    }

    /// Checks that a word only uses generators of this presentation.
    pub fn check_word(&self, w: &Word) -> Result<(), PresentationError> {
        match w.max_generator() {
            Some(index) if index >= self.n_generators() => {
                Err(PresentationError::GeneratorOutOfRange {
                    index,
                    n_generators: self.n_generators(),
                })
            }
            _ => Ok(()),
        }
    }

    pub fn render_word(&self, w: &Word) -> String {
        w.render(&self.generators)
    }
}

impl fmt::Display for Presentation {
    /// Renders in the DSL; the output reparses to an equal presentation.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "group<{} |", self.generators.join(","))?;
        let rels: Vec<String> = self.relators.iter().map(|r| self.render_word(r)).collect();
        if rels.is_empty() {
            write!(f, " >")
        } else {
            write!(f, " {}>", rels.join(", "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drops_empty_relators_and_reduces() {
        let a = Letter::new(0, false);
        let p = Presentation::new(
            vec!["a".into()],
            vec![
                Word::from_letters(vec![a, a.inverse()]),
                Word::from_letters(vec![a, a, a.inverse(), a]),
            ],
        )
        .unwrap();
        assert_eq!(p.relators().len(), 1);
        assert_eq!(p.relators()[0], Word::from_powers(&[(0, 2)]));
    }

    #[test]
    fn rejects_out_of_range_generator() {
        let err = Presentation::new(vec!["a".into()], vec![Word::generator(1)]).unwrap_err();
        assert!(matches!(err, PresentationError::GeneratorOutOfRange { index: 1, .. }));
    }

    #[test]
    fn rejects_duplicate_names() {
        let err = Presentation::new(vec!["a".into(), "a".into()], vec![]).unwrap_err();
        assert_eq!(err, PresentationError::DuplicateGenerator("a".into()));
    }
}
