use std::fmt;
use std::str::FromStr;

use super::dehn::check_small_cancellation;
use super::rewriting::RewritingSystem;
use super::word::{is_cyclically_reduced, Letter, Word};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReductionMode {
    Free,
    Dehn,
    Rewriting,
}

impl FromStr for ReductionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "free" => Ok(ReductionMode::Free),
            "dehn" => Ok(ReductionMode::Dehn),
            "rewriting" => Ok(ReductionMode::Rewriting),
            other => Err(Error::Invalid(format!("unknown reduction mode '{other}'"))),
        }
    }
}

impl fmt::Display for ReductionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReductionMode::Free => "free",
            ReductionMode::Dehn => "dehn",
            ReductionMode::Rewriting => "rewriting",
        })
    }
}

/// A finite presentation with single-letter generators.
///
/// Generators are lowercase ASCII letters; the uppercase letter denotes the
/// inverse. The order of `generators` fixes the shortlex order used for
/// normal forms, ball indexing and bicombing tie-breaks.
#[derive(Clone, Debug)]
pub struct Presentation {
    generators: Vec<char>,
    relators: Vec<Word>,
    mode: ReductionMode,
    rules: Vec<(Word, Word)>,
    system: Option<RewritingSystem>,
}

impl Presentation {
    /// The free group on the first `rank` letters of the alphabet.
    pub fn free(rank: usize) -> Presentation {
        assert!(
            (1..=26).contains(&rank),
            "free group rank must be in 1..=26"
        );
        Presentation {
            generators: ('a'..='z').take(rank).collect(),
            relators: Vec::new(),
            mode: ReductionMode::Free,
            rules: Vec::new(),
            system: None,
        }
    }

    /// Builds and validates a presentation from its parts.
    pub fn new(
        generators: &[char],
        relators: &[&str],
        mode: ReductionMode,
        rules: &[(&str, &str)],
    ) -> Result<Presentation> {
        let mut seen = Vec::new();
        for &g in generators {
            if !g.is_ascii_lowercase() {
                return Err(Error::Invalid(format!(
                    "generator '{g}' must be a lowercase ASCII letter"
                )));
            }
            if seen.contains(&g) {
                return Err(Error::DuplicateGenerator(g));
            }
            seen.push(g);
        }
        if generators.is_empty() {
            return Err(Error::Invalid("presentation has no generators".into()));
        }
        let mut p = Presentation {
            generators: generators.to_vec(),
            relators: Vec::new(),
            mode,
            rules: Vec::new(),
            system: None,
        };
        for r in relators {
            let word = p.parse_word(r)?;
            if word.is_empty() {
                continue;
            }
            p.relators.push(word);
        }
        for (lhs, rhs) in rules {
            let l = p.parse_word(lhs)?;
            let r = p.parse_word(rhs)?;
            p.rules.push((l, r));
        }
        p.validate()?;
        Ok(p)
    }

    /// Parses the line-oriented presentation format:
    ///
    /// ```text
    /// # genus-2 surface group
    /// generators: a b c d
    /// relators: abABcdCD
    /// mode: dehn
    /// rules:
    ///   ba -> ab
    /// ```
    ///
    /// Relators may be separated by spaces or commas and may continue on the
    /// following lines; `(none)` denotes an empty relator list. `mode`
    /// defaults to `free` when there are no relators.
    pub fn parse(text: &str) -> Result<Presentation> {
        #[derive(PartialEq)]
        enum Section {
            None,
            Generators,
            Relators,
            Rules,
        }
        let mut section = Section::None;
        let mut generators: Vec<char> = Vec::new();
        let mut relators: Vec<String> = Vec::new();
        let mut rules: Vec<(String, String)> = Vec::new();
        let mut mode: Option<ReductionMode> = None;
        let mut seen_generators = false;

        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut body = line;
            if let Some((key, rest)) = line.split_once(':') {
                let key = key.trim();
                let next = match key {
                    "generators" => Some(Section::Generators),
                    "relators" => Some(Section::Relators),
                    "rules" => Some(Section::Rules),
                    "mode" => {
                        mode = Some(rest.parse().map_err(|e: Error| Error::Syntax {
                            line: line_no,
                            message: e.to_string(),
                        })?);
                        section = Section::None;
                        continue;
                    }
                    _ => None,
                };
                match next {
                    Some(s) => {
                        if s == Section::Generators {
                            seen_generators = true;
                        }
                        section = s;
                        body = rest.trim();
                    }
                    None => {
                        return Err(Error::Syntax {
                            line: line_no,
                            message: format!("unknown section '{key}'"),
                        })
                    }
                }
            }
            if body.is_empty() {
                continue;
            }
            match section {
                Section::None => {
                    return Err(Error::Syntax {
                        line: line_no,
                        message: format!("text outside any section: '{body}'"),
                    })
                }
                Section::Generators => {
                    for tok in body.split(|c: char| c.is_whitespace() || c == ',') {
                        if tok.is_empty() {
                            continue;
                        }
                        let mut chars = tok.chars();
                        match (chars.next(), chars.next()) {
                            (Some(c), None) => generators.push(c),
                            _ => {
                                return Err(Error::Syntax {
                                    line: line_no,
                                    message: format!("generator '{tok}' is not a single letter"),
                                })
                            }
                        }
                    }
                }
                Section::Relators => {
                    if body == "(none)" {
                        continue;
                    }
                    relators.extend(
                        body.split(|c: char| c.is_whitespace() || c == ',')
                            .filter(|t| !t.is_empty())
                            .map(str::to_owned),
                    );
                }
                Section::Rules => {
                    let (lhs, rhs) = body.split_once("->").ok_or_else(|| Error::Syntax {
                        line: line_no,
                        message: format!("rule '{body}' lacks '->'"),
                    })?;
                    rules.push((lhs.trim().to_owned(), rhs.trim().to_owned()));
                }
            }
        }

        if !seen_generators {
            return Err(Error::Syntax {
                line: 0,
                message: "missing 'generators:' section".into(),
            });
        }
        let mode = match mode {
            Some(m) => m,
            None if relators.is_empty() => ReductionMode::Free,
            None => {
                // Letters are checked first so that the most specific error wins.
                let tmp = Presentation {
                    generators: generators.clone(),
                    relators: Vec::new(),
                    mode: ReductionMode::Free,
                    rules: Vec::new(),
                    system: None,
                };
                for r in &relators {
                    tmp.parse_word(r)?;
                }
                return Err(Error::Syntax {
                    line: 0,
                    message: "presentation with relators needs a 'mode:' line".into(),
                });
            }
        };
        let rel: Vec<&str> = relators.iter().map(String::as_str).collect();
        let rl: Vec<(&str, &str)> = rules
            .iter()
            .map(|(l, r)| (l.as_str(), r.as_str()))
            .collect();
        Presentation::new(&generators, &rel, mode, &rl)
    }

    fn validate(&mut self) -> Result<()> {
        match self.mode {
            ReductionMode::Free => {
                if let Some(r) = self.relators.first() {
                    return Err(Error::Invalid(format!(
                        "free mode does not accept relators (found {})",
                        self.format_word(r)
                    )));
                }
            }
            ReductionMode::Dehn => {
                for r in &self.relators {
                    if !is_cyclically_reduced(r) {
                        return Err(Error::NotCyclicallyReduced(self.format_word(r)));
                    }
                }
                check_small_cancellation(self)?;
            }
            ReductionMode::Rewriting => {
                let system = RewritingSystem::new(self)?;
                for r in &self.relators {
                    if !system.normal_form(r).is_empty() {
                        return Err(Error::RelatorNotTrivial(self.format_word(r)));
                    }
                }
                self.system = Some(system);
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Number of letters (generators and inverses).
    pub fn alphabet_size(&self) -> usize {
        2 * self.generators.len()
    }

    pub fn generators(&self) -> &[char] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn mode(&self) -> ReductionMode {
        self.mode
    }

    pub fn rules(&self) -> &[(Word, Word)] {
        &self.rules
    }

    pub(crate) fn rewriting_system(&self) -> Option<&RewritingSystem> {
        self.system.as_ref()
    }

    /// All letters in shortlex order.
    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.alphabet_size()).map(Letter::from_code)
    }

    pub fn letter(&self, c: char) -> Option<Letter> {
        let lower = c.to_ascii_lowercase();
        let g = self.generators.iter().position(|&x| x == lower)?;
        Some(Letter::new(g, c.is_ascii_uppercase()))
    }

    pub fn letter_char(&self, l: Letter) -> char {
        let c = self.generators[l.generator()];
        if l.is_inverse() {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }

    /// Parses a word; `""` and `"1"` denote the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text == "1" {
            return Ok(Vec::new());
        }
        text.chars()
            .map(|c| {
                self.letter(c).ok_or_else(|| Error::UnknownLetter {
                    letter: c,
                    context: format!("word '{text}'"),
                })
            })
            .collect()
    }

    /// Renders a word; the empty word is `1`.
    pub fn format_word(&self, word: &[Letter]) -> String {
        if word.is_empty() {
            "1".to_owned()
        } else {
            word.iter().map(|&l| self.letter_char(l)).collect()
        }
    }

    /// One-line description of the generating set, for report headers.
    pub fn describe(&self) -> String {
        let gens: String = self.generators.iter().collect();
        let rels: Vec<String> = self.relators.iter().map(|r| self.format_word(r)).collect();
        format!(
            "<{} | {}> ({})",
            gens,
            if rels.is_empty() {
                "-".to_owned()
            } else {
                rels.join(", ")
            },
            self.mode
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_free_group() {
        let p = Presentation::parse("generators: a b\nrelators: (none)\nmode: free\n").unwrap();
        assert_eq!(p.rank(), 2);
        assert!(p.relators().is_empty());
        assert_eq!(p.mode(), ReductionMode::Free);
    }

    #[test]
    fn parses_surface_group_with_comments() {
        let text =
            "# genus 2\ngenerators: a b c d\nrelators: abABcdCD  # one relator\nmode: dehn\n";
        let p = Presentation::parse(text).unwrap();
        assert_eq!(p.relators().len(), 1);
        assert_eq!(p.format_word(&p.relators()[0]), "abABcdCD");
    }

    #[test]
    fn unknown_letter_is_named() {
        let err = Presentation::parse("generators: a\nrelators: ab\n").unwrap_err();
        match err {
            Error::UnknownLetter { letter, .. } => assert_eq!(letter, 'b'),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn duplicate_generator_is_rejected() {
        let err = Presentation::parse("generators: a b a\n").unwrap_err();
        assert!(matches!(err, Error::DuplicateGenerator('a')));
        let err = Presentation::parse("generators: a A\n").unwrap_err();
        assert!(matches!(err, Error::Invalid(_)));
    }

    #[test]
    fn relators_span_lines() {
        let text =
            "generators: a b c d\nrelators:\n  acAC, adAD\n  bcBC bdBD\nmode: rewriting\nrules:\n";
        // Without rules the relators cannot reduce.
        let err = Presentation::parse(text).unwrap_err();
        assert!(matches!(err, Error::RelatorNotTrivial(_)));
    }

    #[test]
    fn unknown_section_is_a_syntax_error() {
        let err = Presentation::parse("generators: a\nfoo: bar\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, .. }));
    }

    #[test]
    fn words_round_trip() {
        let p = Presentation::free(2);
        let w = p.parse_word("abAB").unwrap();
        assert_eq!(p.format_word(&w), "abAB");
        assert!(p.parse_word("1").unwrap().is_empty());
        assert_eq!(p.format_word(&[]), "1");
    }
}
