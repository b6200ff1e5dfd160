//! User-supplied kernels `K` claimed to satisfy `d - Δ <= K <= d` for a
//! quasi-tree metric `d`.
//!
//! File format: a `delta: value` line, then CSV with header `x,y,d,K`.
//! Points are labelled by arbitrary strings; `#` lines are comments.

use std::collections::HashMap;

use crate::group::{Group, GroupElement};
use crate::kernel::{cnd_certificate, DisplacementKernel, Provenance};
use crate::{Error, Result};

const SANDWICH_TOLERANCE: f64 = 1e-9;
const CND_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct QuasiTreeKernelInput {
    labels: Vec<String>,
    distances: Vec<f64>,
    kernel: Vec<f64>,
    delta: f64,
}

impl QuasiTreeKernelInput {
    pub fn new(
        labels: Vec<String>,
        distances: Vec<f64>,
        kernel: Vec<f64>,
        delta: f64,
    ) -> Result<Self> {
        let n = labels.len();
        if distances.len() != n * n || kernel.len() != n * n {
            return Err(Error::Invalid(format!(
                "quasi-tree input needs {n}x{n} matrices"
            )));
        }
        if delta.is_nan() || delta < 0.0 {
            return Err(Error::NegativeConstant(delta));
        }
        Ok(QuasiTreeKernelInput {
            labels,
            distances,
            kernel,
            delta,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.distances[i * self.labels.len() + j]
    }

    pub fn kernel(&self, i: usize, j: usize) -> f64 {
        self.kernel[i * self.labels.len() + j]
    }
}

/// Pairs may be listed in either order; the diagonal defaults to zero.
pub fn parse_quasitree_kernel(text: &str) -> Result<QuasiTreeKernelInput> {
    let mut delta = None;
    let mut body = String::new();
    let mut body_lines = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(v) = line.strip_prefix("delta:") {
            let value: f64 = v.trim().parse().map_err(|_| Error::Syntax {
                line: n + 1,
                message: format!("bad delta {:?}", v.trim()),
            })?;
            delta = Some(value);
            continue;
        }
        body.push_str(line);
        body.push('\n');
        body_lines.push(n + 1);
    }
    let delta =
        delta.ok_or_else(|| Error::Invalid("quasi-tree kernel has no 'delta:' line".into()))?;

    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(body.as_bytes());
    let header = reader.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != ["x", "y", "d", "K"] {
        return Err(Error::Syntax {
            line: body_lines.first().copied().unwrap_or(1),
            message: format!(
                "expected header x,y,d,K, got {:?}",
                header.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut entries: Vec<(usize, usize, f64, f64, usize)> = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record?;
        let line = body_lines.get(r + 1).copied().unwrap_or(0);
        let syntax = |message: String| Error::Syntax { line, message };
        if record.len() != 4 {
            return Err(syntax(format!("expected 4 fields, got {}", record.len())));
        }
        let mut id = |label: &str| {
            *index.entry(label.to_string()).or_insert_with(|| {
                labels.push(label.to_string());
                labels.len() - 1
            })
        };
        let (i, j) = (id(&record[0]), id(&record[1]));
        let num = |f: &str| {
            f.parse::<f64>()
                .map_err(|_| syntax(format!("bad number {f:?}")))
        };
        entries.push((i, j, num(&record[2])?, num(&record[3])?, line));
    }
    let n = labels.len();
    let mut d = vec![f64::NAN; n * n];
    let mut k = vec![f64::NAN; n * n];
    for i in 0..n {
        d[i * n + i] = 0.0;
        k[i * n + i] = 0.0;
    }
    let mut seen = vec![false; n * n];
    for (i, j, dv, kv, line) in entries {
        if seen[i * n + j] && (d[i * n + j] != dv || k[i * n + j] != kv) {
            return Err(Error::Syntax {
                line,
                message: format!("conflicting entries for ({}, {})", labels[i], labels[j]),
            });
        }
        for (a, b) in [(i, j), (j, i)] {
            d[a * n + b] = dv;
            k[a * n + b] = kv;
            seen[a * n + b] = true;
        }
    }
    if let Some(missing) = k.iter().position(|v| v.is_nan()) {
        return Err(Error::Invalid(format!(
            "no entry for pair ({}, {})",
            labels[missing / n],
            labels[missing % n]
        )));
    }
    QuasiTreeKernelInput::new(labels, d, k, delta)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SandwichViolation {
    pub x: String,
    pub y: String,
    pub d: f64,
    pub k: f64,
}

#[derive(Clone, Debug)]
pub struct QuasiTreeVerdict {
    pub pass: bool,
    pub sandwich_violations: Vec<SandwichViolation>,
    pub min_eigenvalue: f64,
    /// Mean-zero vector with `sum v(x) v(y) K(x, y) > 0` when CND fails.
    pub cnd_witness: Option<Vec<(String, f64)>>,
    /// `max K(sx, sy) - K(x, y)` over supplied translates, when the labels
    /// are group elements; otherwise `Δ` stands as declared.
    pub derived_displacement: Option<f64>,
    /// `(s, x, y)` with `K(sx, sy) > K(x, y) + Δ`.
    pub displacement_witness: Option<(String, String, String)>,
}

/// Checks `d - Δ <= K <= d` on every pair and conditional negativity of
/// `K`. With a group, labels are read as its elements and the bound
/// `K(sx, sy) <= K(x, y) + Δ` is checked on every supplied translate.
pub fn validate_quasitree_kernel(
    q: &QuasiTreeKernelInput,
    group: Option<&Group>,
) -> Result<QuasiTreeVerdict> {
    let n = q.len();
    let mut sandwich_violations = Vec::new();
    for i in 0..n {
        for j in i..n {
            let (d, k) = (q.distance(i, j), q.kernel(i, j));
            if k > d + SANDWICH_TOLERANCE || k < d - q.delta - SANDWICH_TOLERANCE {
                sandwich_violations.push(SandwichViolation {
                    x: q.labels[i].clone(),
                    y: q.labels[j].clone(),
                    d,
                    k,
                });
            }
        }
    }

    let elements = match group {
        Some(g) => {
            let elements: Vec<GroupElement> = q
                .labels
                .iter()
                .map(|l| g.element(l))
                .collect::<Result<_>>()?;
            let mut unique = elements.clone();
            unique.sort();
            unique.dedup();
            if unique.len() != n {
                return Err(Error::Invalid(
                    "two labels name the same group element".into(),
                ));
            }
            elements
        }
        None => placeholder_elements(n),
    };
    let kernel = DisplacementKernel::from_values(
        elements,
        q.kernel.clone(),
        Provenance::UserSupplied,
        q.delta,
    )?;
    let all: Vec<usize> = (0..n).collect();
    let (min_eigenvalue, cnd_witness) = if n >= 2 {
        let (lambda, v) = cnd_certificate(&kernel, &all)?;
        let witness =
            (lambda < -CND_TOLERANCE).then(|| q.labels.iter().cloned().zip(v).collect::<Vec<_>>());
        (lambda, witness)
    } else {
        (0.0, None)
    };

    let (derived_displacement, displacement_witness) = match group {
        Some(g) => {
            let (m, witness) = one_sided_displacement(&kernel, g, q.delta)?;
            (Some(m), witness)
        }
        None => (None, None),
    };

    Ok(QuasiTreeVerdict {
        pass: sandwich_violations.is_empty()
            && cnd_witness.is_none()
            && displacement_witness.is_none(),
        sandwich_violations,
        min_eigenvalue,
        cnd_witness,
        derived_displacement,
        displacement_witness,
    })
}

/// Distinct stand-in elements for label-only inputs.
fn placeholder_elements(n: usize) -> Vec<GroupElement> {
    let g = Group::free(1);
    let a = g.element("a").expect("generator");
    let mut out = vec![GroupElement::identity()];
    while out.len() < n {
        let next = g.multiply(out.last().unwrap(), &a).expect("free group");
        out.push(next);
    }
    out.truncate(n);
    out
}

/// `(s, x, y)` as formatted words.
type Triple = (String, String, String);

fn one_sided_displacement(
    k: &DisplacementKernel<f64>,
    group: &Group,
    delta: f64,
) -> Result<(f64, Option<Triple>)> {
    let mut best = 0.0f64;
    let mut witness = None;
    for s in k.elements().iter().filter(|s| !s.is_identity()) {
        let map = crate::kernel::translation_map(k, group, s)?;
        for (i, si) in map.iter().enumerate() {
            let Some(si) = *si else { continue };
            for (j, sj) in map.iter().enumerate() {
                let Some(sj) = *sj else { continue };
                let excess = k.value(si, sj) - k.value(i, j);
                if excess > best {
                    best = excess;
                    if excess > delta + SANDWICH_TOLERANCE && witness.is_none() {
                        witness = Some((
                            group.format(s),
                            group.format(k.element(i)),
                            group.format(k.element(j)),
                        ));
                    }
                }
            }
        }
    }
    Ok((best, witness))
}
