//! Isometric actions on trees given by homomorphisms into free groups,
//! their orbit kernels, validated quasi-tree kernels and orbit growth.

mod growth;
mod quasitree;

pub use growth::{
    orbit_growth_report, GrowthReport, GrowthVerdict, SphereGrowth, GROWTH_THRESHOLD,
};
pub use quasitree::{
    parse_quasitree_kernel, validate_quasitree_kernel, QuasiTreeKernelInput, QuasiTreeVerdict,
    SandwichViolation,
};

use num_traits::Zero;

use crate::group::{
    free_reduce, invert_word, CayleyBall, Group, GroupElement, Letter, Presentation, Word,
};
use crate::kernel::{DisplacementKernel, Provenance};
use crate::{Error, Rational, Result, Scalar};

/// A homomorphism from a presented group to the free group of rank
/// `target_rank`, acting on that group's Cayley tree with basepoint `e`.
#[derive(Clone, Debug)]
pub struct TreeActionSpec {
    source: Presentation,
    target: Presentation,
    images: Vec<Word>,
}

impl TreeActionSpec {
    /// Fails with `NotHomomorphism` unless every relator maps to the identity.
    pub fn new(
        source: &Presentation,
        target_rank: usize,
        images: Vec<Word>,
    ) -> Result<TreeActionSpec> {
        if target_rank == 0 {
            return Err(Error::Invalid("target rank must be at least 1".into()));
        }
        if images.len() != source.rank() {
            return Err(Error::Invalid(format!(
                "{} generator images for {} generators",
                images.len(),
                source.rank()
            )));
        }
        let target = Presentation::free(target_rank);
        if let Some(bad) = images
            .iter()
            .flatten()
            .find(|l| l.generator() >= target_rank)
        {
            return Err(Error::Invalid(format!(
                "image letter {:?} outside a free group of rank {target_rank}",
                bad
            )));
        }
        let spec = TreeActionSpec {
            source: source.clone(),
            target,
            images: images.into_iter().map(|w| free_reduce(&w)).collect(),
        };
        for r in source.relators() {
            let image = spec.image(r);
            if !image.is_empty() {
                return Err(Error::NotHomomorphism {
                    relator: source.format_word(r),
                    image: spec.target.format_word(&image),
                });
            }
        }
        Ok(spec)
    }

    pub fn source(&self) -> &Presentation {
        &self.source
    }

    pub fn target(&self) -> &Presentation {
        &self.target
    }

    pub fn target_rank(&self) -> usize {
        self.target.rank()
    }

    pub fn generator_image(&self, generator: usize) -> &[Letter] {
        &self.images[generator]
    }

    /// Freely reduced image of a source word.
    pub fn image(&self, word: &[Letter]) -> Word {
        let mut out = Vec::new();
        for l in word {
            let g = &self.images[l.generator()];
            if l.is_inverse() {
                out.extend(invert_word(g));
            } else {
                out.extend_from_slice(g);
            }
        }
        free_reduce(&out)
    }

    /// Tree distance `|φ(x)^-1 φ(y)|` between orbit points.
    pub fn orbit_distance(&self, x: &GroupElement, y: &GroupElement) -> usize {
        let mut w = invert_word(&self.image(x.letters()));
        w.extend(self.image(y.letters()));
        free_reduce(&w).len()
    }

    pub fn describe(&self) -> String {
        let maps: Vec<String> = self
            .source
            .generators()
            .iter()
            .zip(&self.images)
            .map(|(g, w)| format!("{g}->{}", self.target.format_word(w)))
            .collect();
        format!("F{} via {}", self.target_rank(), maps.join(" "))
    }
}

/// Action file: a `target_rank: k` line, then one `g -> word` line per
/// source generator. `1` or nothing after the arrow is the identity.
/// `#` starts a comment.
pub fn parse_action(text: &str, source: &Presentation) -> Result<TreeActionSpec> {
    let mut rank = None;
    let mut images: Vec<Option<(usize, String)>> = vec![None; source.rank()];
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let syntax = |message: String| Error::Syntax {
            line: line_no,
            message,
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(value) = line.strip_prefix("target_rank:") {
            let k: usize = value
                .trim()
                .parse()
                .map_err(|_| syntax(format!("bad target rank {:?}", value.trim())))?;
            rank = Some(k);
            continue;
        }
        let (lhs, rhs) = line
            .split_once("->")
            .ok_or_else(|| syntax(format!("expected 'g -> word', got {line:?}")))?;
        let mut chars = lhs.trim().chars();
        let g = match (chars.next(), chars.next()) {
            (Some(c), None) => c,
            _ => {
                return Err(syntax(format!(
                    "expected one generator, got {:?}",
                    lhs.trim()
                )))
            }
        };
        let letter = source
            .letter(g)
            .filter(|l| !l.is_inverse())
            .ok_or_else(|| syntax(format!("{g:?} is not a generator of the source group")))?;
        if images[letter.generator()].is_some() {
            return Err(syntax(format!("second image for generator {g:?}")));
        }
        images[letter.generator()] = Some((line_no, rhs.trim().to_string()));
    }
    let rank =
        rank.ok_or_else(|| Error::Invalid("action file has no 'target_rank:' line".into()))?;
    if rank == 0 {
        return Err(Error::Invalid("target rank must be at least 1".into()));
    }
    let target = Presentation::free(rank);
    let mut words = Vec::with_capacity(images.len());
    for (g, image) in images.into_iter().enumerate() {
        let (line, text) = image.ok_or_else(|| {
            Error::Invalid(format!(
                "no image for generator {:?}",
                source.generators()[g]
            ))
        })?;
        let word = target.parse_word(&text).map_err(|e| Error::Syntax {
            line,
            message: e.to_string(),
        })?;
        words.push(word);
    }
    TreeActionSpec::new(source, rank, words)
}

/// `K(s, t) = d_T(φ(s), φ(t))`, exact, with `M = 0`.
pub fn orbit_kernel<T: Scalar>(
    action: &TreeActionSpec,
    ball: &CayleyBall,
) -> DisplacementKernel<T> {
    let images: Vec<Word> = ball
        .elements()
        .iter()
        .map(|x| action.image(x.letters()))
        .collect();
    let n = images.len();
    let mut exact = vec![Rational::zero(); n * n];
    for i in 0..n {
        let inv = invert_word(&images[i]);
        for j in i + 1..n {
            let mut w = inv.clone();
            w.extend_from_slice(&images[j]);
            let d = Rational::from_integer(free_reduce(&w).len() as i64);
            exact[i * n + j] = d;
            exact[j * n + i] = d;
        }
    }
    DisplacementKernel::from_exact(ball.elements().to_vec(), exact, Provenance::TreeAction)
}

/// Checks `φ(st) = φ(s)φ(t)` on the given pairs; returns the failing pairs.
pub fn check_homomorphism(
    action: &TreeActionSpec,
    group: &Group,
    pairs: &[(GroupElement, GroupElement)],
) -> Result<Vec<(GroupElement, GroupElement)>> {
    let mut bad = Vec::new();
    for (s, t) in pairs {
        let st = group.multiply(s, t)?;
        let mut prod = action.image(s.letters());
        prod.extend(action.image(t.letters()));
        if free_reduce(&prod) != action.image(st.letters()) {
            bad.push((s.clone(), t.clone()));
        }
    }
    Ok(bad)
}
