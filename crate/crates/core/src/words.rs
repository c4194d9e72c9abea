//! Free-group words over a named generator alphabet.
//!
//! A [`Word`] is kept freely reduced at all times: no letter is ever adjacent
//! to its own inverse, and the empty word is the identity. Words store the
//! arity of their alphabet so that operations on words from different
//! alphabets are rejected instead of silently producing garbage.
//!
//! Text syntax: whitespace-separated tokens, each a generator name optionally
//! suffixed with a single apostrophe for its inverse, e.g. `"a b' c"`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An ordered alphabet of distinct generator names.
///
/// Names match `[a-zA-Z0-9_]+` and are case-significant. The order is fixed
/// and indexes every table built downstream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSet {
    names: Vec<String>,
}

impl GeneratorSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for name in &names {
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::UnknownGenerator(name.clone()));
            }
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::UnknownGenerator(format!("duplicate generator {name}")));
            }
        }
        Ok(Self { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Parses a word in the whitespace/apostrophe grammar.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            let (name, inv) = match token.strip_suffix('\'') {
                Some(base) => (base, true),
                None => (token, false),
            };
            let gen = self
                .index_of(name)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
            letters.push(Letter { gen, inv });
        }
        Ok(Word::reduce(self.len(), letters))
    }

    /// Fresh alphabet `x1, x2, ..., xn`, used for derived presentations.
    pub fn fresh(count: usize) -> Self {
        Self {
            names: (1..=count).map(|i| format!("x{i}")).collect(),
        }
    }
}

/// One signed letter: a generator index and an inversion flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub gen: usize,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: usize, inv: bool) -> Self {
        Self { gen, inv }
    }

    pub fn inverse(self) -> Self {
        Self {
            gen: self.gen,
            inv: !self.inv,
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inv != other.inv
    }
}

/// A freely reduced word over an alphabet of `arity` generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    arity: usize,
    letters: Vec<Letter>,
}

impl Word {
    /// The identity word over an alphabet of `arity` generators.
    pub fn identity(arity: usize) -> Self {
        Self {
            arity,
            letters: Vec::new(),
        }
    }

    /// A single-letter word.
    pub fn generator(arity: usize, gen: usize) -> Result<Self> {
        if gen >= arity {
            return Err(Error::InvalidGenerator { index: gen, arity });
        }
        Ok(Self {
            arity,
            letters: vec![Letter { gen, inv: false }],
        })
    }

    /// Freely reduces a raw letter sequence. The single entry point through
    /// which every `Word` is built, so reducedness is a true invariant.
    pub fn reduce(arity: usize, raw: impl IntoIterator<Item = Letter>) -> Self {
        let mut stack: Vec<Letter> = Vec::new();
        for letter in raw {
            match stack.last() {
                Some(&top) if top.cancels(letter) => {
                    stack.pop();
                }
                _ => stack.push(letter),
            }
        }
        Self {
            arity,
            letters: stack,
        }
    }

    /// Like [`Word::reduce`] but rejects out-of-range generator indices.
    pub fn reduce_checked(arity: usize, raw: &[Letter]) -> Result<Self> {
        for letter in raw {
            if letter.gen >= arity {
                return Err(Error::InvalidGenerator {
                    index: letter.gen,
                    arity,
                });
            }
        }
        Ok(Self::reduce(arity, raw.iter().copied()))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    /// Same as [`Word::is_identity`]; the identity is the empty word.
    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    fn check_same_alphabet(&self, other: &Word) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::GeneratorSetMismatch {
                left: self.arity,
                right: other.arity,
            });
        }
        Ok(())
    }

    /// Freely reduced concatenation `self · other`.
    pub fn concat(&self, other: &Word) -> Result<Word> {
        self.check_same_alphabet(other)?;
        Ok(Word::reduce(
            self.arity,
            self.letters.iter().chain(other.letters.iter()).copied(),
        ))
    }

    /// The inverse word: letters reversed and flipped.
    pub fn inverse(&self) -> Word {
        Word {
            arity: self.arity,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Reduced commutator `self · other · self⁻¹ · other⁻¹`.
    pub fn commutator(&self, other: &Word) -> Result<Word> {
        self.check_same_alphabet(other)?;
        Ok(Word::reduce(
            self.arity,
            self.letters
                .iter()
                .copied()
                .chain(other.letters.iter().copied())
                .chain(self.letters.iter().rev().map(|l| l.inverse()))
                .chain(other.letters.iter().rev().map(|l| l.inverse())),
        ))
    }

    /// `self` raised to an integer power, reduced.
    pub fn power(&self, exponent: i64) -> Word {
        let base = if exponent < 0 {
            self.inverse()
        } else {
            self.clone()
        };
        let mut letters = Vec::new();
        for _ in 0..exponent.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        Word::reduce(self.arity, letters)
    }

    /// Applies a homomorphism of free groups given by generator images.
    ///
    /// `images[g]` is the image of generator `g`; all images must share one
    /// target alphabet, and every generator of `self` must have an image.
    pub fn substitute(&self, images: &[Word]) -> Result<Word> {
        let target_arity = match images.first() {
            Some(w) => w.arity,
            None if self.is_identity() => return Ok(Word::identity(0)),
            None => return Err(Error::MissingImage(0)),
        };
        for image in images {
            if image.arity != target_arity {
                return Err(Error::GeneratorSetMismatch {
                    left: target_arity,
                    right: image.arity,
                });
            }
        }
        let mut raw = Vec::new();
        for letter in &self.letters {
            let image = images.get(letter.gen).ok_or(Error::MissingImage(letter.gen))?;
            if letter.inv {
                raw.extend(image.letters.iter().rev().map(|l| l.inverse()));
            } else {
                raw.extend_from_slice(&image.letters);
            }
        }
        Ok(Word::reduce(target_arity, raw))
    }

    /// Cyclically reduces: strips matching first/last letters until none cancel.
    pub fn cyclically_reduce(&self) -> Word {
        let mut letters = self.letters.clone();
        while letters.len() >= 2 {
            let first = letters[0];
            let last = *letters.last().unwrap();
            if first.cancels(last) {
                letters.pop();
                letters.remove(0);
            } else {
                break;
            }
        }
        Word {
            arity: self.arity,
            letters,
        }
    }

    /// All cyclic rotations of the word.
    pub fn rotations(&self) -> Vec<Word> {
        let n = self.letters.len().max(1);
        (0..n)
            .map(|k| {
                let rotated: Vec<Letter> = self
                    .letters
                    .iter()
                    .cycle()
                    .skip(k)
                    .take(self.letters.len())
                    .copied()
                    .collect();
                Word::reduce(self.arity, rotated)
            })
            .collect()
    }

    /// Renders with the given names, `""` for the identity.
    pub fn display(&self, gens: &GeneratorSet) -> String {
        debug_assert_eq!(gens.len(), self.arity);
        self.letters
            .iter()
            .map(|l| {
                let mut token = gens.name(l.gen).to_string();
                if l.inv {
                    token.push('\'');
                }
                token
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for Word {
    /// Index-based rendering (`g0 g1' ...`) when no alphabet is at hand.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rendered: Vec<String> = self
            .letters
            .iter()
            .map(|l| format!("g{}{}", l.gen, if l.inv { "'" } else { "" }))
            .collect();
        write!(f, "{}", rendered.join(" "))
    }
}

/// A finitely presented group: an alphabet plus relator words.
///
/// Relators are freely and cyclically reduced on construction; relators that
/// reduce to the identity are dropped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    generators: Arc<GeneratorSet>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: GeneratorSet, relators: Vec<Word>) -> Result<Self> {
        let arity = generators.len();
        let mut reduced = Vec::new();
        for relator in relators {
            if relator.arity() != arity {
                return Err(Error::GeneratorSetMismatch {
                    left: arity,
                    right: relator.arity(),
                });
            }
            let relator = relator.cyclically_reduce();
            if !relator.is_identity() {
                reduced.push(relator);
            }
        }
        Ok(Self {
            generators: Arc::new(generators),
            relators: reduced,
        })
    }

    /// Builds from generator names and relator words in text syntax.
    pub fn parse<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        relator_texts: &[&str],
    ) -> Result<Self> {
        let gens = GeneratorSet::new(names)?;
        let relators = relator_texts
            .iter()
            .map(|t| gens.parse_word(t))
            .collect::<Result<Vec<_>>>()?;
        Self::new(gens, relators)
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.generators
    }

    pub fn arity(&self) -> usize {
        self.generators.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        self.generators.parse_word(text)
    }

    /// One `Word` per generator, in alphabet order.
    pub fn generator_words(&self) -> Vec<Word> {
        (0..self.arity())
            .map(|g| Word::generator(self.arity(), g).expect("generator index in range"))
            .collect()
    }

    pub fn display(&self) -> String {
        let rels: Vec<String> = self
            .relators
            .iter()
            .map(|r| r.display(&self.generators))
            .collect();
        format!(
            "< {} | {} >",
            self.generators.names().join(", "),
            rels.join(", ")
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens_ab() -> GeneratorSet {
        GeneratorSet::new(["a", "b"]).unwrap()
    }

    #[test]
    fn reduce_cancels_adjacent_inverses() {
        let gens = gens_ab();
        assert_eq!(gens.parse_word("a a' b").unwrap(), gens.parse_word("b").unwrap());
        assert_eq!(gens.parse_word("").unwrap(), Word::identity(2));
        assert_eq!(
            gens.parse_word("a b b' a").unwrap(),
            gens.parse_word("a a").unwrap()
        );
    }

    #[test]
    fn reduce_is_idempotent() {
        let gens = gens_ab();
        let w = gens.parse_word("a b b' a b a'").unwrap();
        let again = Word::reduce(2, w.letters().to_vec());
        assert_eq!(w, again);
    }

    #[test]
    fn concat_reduces_across_the_seam() {
        let gens = gens_ab();
        let u = gens.parse_word("a b").unwrap();
        let v = gens.parse_word("b' a").unwrap();
        assert_eq!(u.concat(&v).unwrap(), gens.parse_word("a a").unwrap());
        assert_eq!(u.concat(&Word::identity(2)).unwrap(), u);
        let a = gens.parse_word("a").unwrap();
        assert!(a.concat(&a.inverse()).unwrap().is_identity());
    }

    #[test]
    fn concat_rejects_alphabet_mismatch() {
        let u = Word::identity(2);
        let v = Word::identity(3);
        assert!(matches!(
            u.concat(&v),
            Err(Error::GeneratorSetMismatch { .. })
        ));
    }

    #[test]
    fn inverse_examples() {
        let gens = gens_ab();
        let w = gens.parse_word("a b").unwrap();
        assert_eq!(w.inverse(), gens.parse_word("b' a'").unwrap());
        assert_eq!(Word::identity(2).inverse(), Word::identity(2));
        assert_eq!(
            gens.parse_word("a a").unwrap().inverse(),
            gens.parse_word("a' a'").unwrap()
        );
        assert!(w.concat(&w.inverse()).unwrap().is_identity());
    }

    #[test]
    fn commutator_examples() {
        let gens = gens_ab();
        let a = gens.parse_word("a").unwrap();
        let b = gens.parse_word("b").unwrap();
        assert_eq!(
            a.commutator(&b).unwrap(),
            gens.parse_word("a b a' b'").unwrap()
        );
        assert!(a.commutator(&a).unwrap().is_identity());
        // Hand reduction: (ab) b (ab)⁻¹ b⁻¹ = a b b b' a' b' = a b a' b'.
        let ab = gens.parse_word("a b").unwrap();
        assert_eq!(
            ab.commutator(&b).unwrap(),
            gens.parse_word("a b a' b'").unwrap()
        );
    }

    #[test]
    fn substitute_examples() {
        let gens = gens_ab();
        let target = GeneratorSet::new(["x"]).unwrap();
        let u = gens.parse_word("a b").unwrap();
        let images = vec![target.parse_word("x").unwrap(), target.parse_word("x'").unwrap()];
        assert!(u.substitute(&images).unwrap().is_identity());

        let gens_a = GeneratorSet::new(["a"]).unwrap();
        let a = gens_a.parse_word("a").unwrap();
        let bb = gens_ab().parse_word("b b").unwrap();
        assert_eq!(a.substitute(std::slice::from_ref(&bb)).unwrap(), bb);

        // Identity substitution fixes the Klein bottle relator.
        let relator = gens.parse_word("a b a' b").unwrap();
        let id_images = vec![gens.parse_word("a").unwrap(), gens.parse_word("b").unwrap()];
        assert_eq!(relator.substitute(&id_images).unwrap(), relator);
    }

    #[test]
    fn substitute_missing_image() {
        let gens = gens_ab();
        let u = gens.parse_word("a b").unwrap();
        let images = vec![gens.parse_word("a").unwrap()];
        assert!(matches!(u.substitute(&images), Err(Error::MissingImage(1))));
    }

    #[test]
    fn presentation_cyclically_reduces_and_drops_empty_relators() {
        let p = Presentation::parse(["x"], &[""]).unwrap();
        assert!(p.relators().is_empty());

        let p = Presentation::parse(["a", "b"], &["a' b a a a'"]).unwrap();
        // Free reduction gives a' b a, then the cyclic pass strips both ends.
        assert_eq!(p.relators().len(), 1);
        assert_eq!(p.relators()[0], p.parse_word("b").unwrap());
    }

    #[test]
    fn parse_rejects_unknown_generator() {
        let p = Presentation::parse(["a"], &[]).unwrap();
        assert!(matches!(
            p.parse_word("a e"),
            Err(Error::UnknownGenerator(_))
        ));
    }

    #[test]
    fn generator_set_rejects_bad_names() {
        assert!(GeneratorSet::new(["a", "a"]).is_err());
        assert!(GeneratorSet::new([""]).is_err());
        assert!(GeneratorSet::new(["a'b"]).is_err());
        assert!(GeneratorSet::new(["ok_1", "Ok_1x"]).is_ok());
    }
}
