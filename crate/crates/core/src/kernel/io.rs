//! Kernel CSV: header `i,j,K`, one row per pair `i <= j` in ball order.

use std::io::{Read, Write};

use super::{DisplacementKernel, Provenance};
use crate::group::GroupElement;
use crate::{Error, Result, Scalar};

pub fn write_kernel_csv<T: Scalar, W: Write>(k: &DisplacementKernel<T>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["i", "j", "K"])?;
    for i in 0..k.len() {
        for j in i..k.len() {
            w.write_record([i.to_string(), j.to_string(), k.value(i, j).to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a kernel over `elements`. Each row sets both `(i, j)` and `(j, i)`;
/// every unordered pair must appear. Values are taken as given, so a
/// malformed kernel loads and is left to the structural checks.
pub fn read_kernel_csv<T: Scalar, R: Read>(
    input: R,
    elements: Vec<GroupElement>,
) -> Result<DisplacementKernel<T>> {
    let n = elements.len();
    let mut values = vec![T::zero(); n * n];
    let mut seen = vec![false; n * n];
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(input);
    for (line, record) in r.records().enumerate() {
        let record = record?;
        let syntax = |message: String| Error::Syntax {
            line: line + 2,
            message,
        };
        if record.len() != 3 {
            return Err(syntax(format!("expected 3 fields, got {}", record.len())));
        }
        let index = |f: &str| -> Result<usize> {
            let i: usize = f.parse().map_err(|_| syntax(format!("bad index {f:?}")))?;
            if i >= n {
                return Err(syntax(format!("index {i} outside a ball of {n} elements")));
            }
            Ok(i)
        };
        let (i, j) = (index(&record[0])?, index(&record[1])?);
        let v: f64 = record[2]
            .parse()
            .map_err(|_| syntax(format!("bad value {:?}", &record[2])))?;
        values[i * n + j] = T::lit(v);
        values[j * n + i] = T::lit(v);
        seen[i * n + j] = true;
        seen[j * n + i] = true;
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(Error::Invalid(format!(
            "kernel CSV has no entry for pair ({}, {})",
            missing / n,
            missing % n
        )));
    }
    DisplacementKernel::from_values(elements, values, Provenance::UserSupplied, T::zero())
}
