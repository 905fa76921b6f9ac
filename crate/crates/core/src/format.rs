//! Plain-text file formats.
//!
//! Design file: a header `v b k`, then `b` lines of `k` ascending 0-based
//! point indices, blocks in lexicographic order. Planes use the same format
//! with lines as blocks.
//!
//! Resolution file: a header `r n`, then `r` lines of `n` ascending block
//! indices into the companion design file, classes ordered by their smallest
//! block. Several resolution files may be concatenated, optionally separated
//! by blank lines, to form a family.
//!
//! Index list: one index per line, ascending.
//!
//! All output uses LF line endings and no trailing whitespace.

use std::fmt::Write as _;

use thiserror::Error;

use crate::design::{DesignError, Resolution, SteinerDesign};
use crate::incidence::{IncidenceError, IncidenceStructure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Incidence(#[from] IncidenceError),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error("blocks have different sizes; the design format needs a uniform k")]
    Ragged,
}

fn parse_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        message: message.into(),
    }
}

/// Non-empty lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn numbers(line_no: usize, line: &str) -> Result<Vec<usize>, FormatError> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse()
                .map_err(|_| parse_err(line_no, format!("not a non-negative integer: {tok:?}")))
        })
        .collect()
}

fn join(xs: &[usize]) -> String {
    let mut out = String::new();
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        write!(out, "{x}").expect("writing to a String");
    }
    out
}

/// Writes blocks in lexicographic order.
pub fn write_design(structure: &IncidenceStructure) -> Result<String, FormatError> {
    let canon = structure.canonical();
    let k = canon.blocks().first().map_or(0, Vec::len);
    if canon.blocks().iter().any(|b| b.len() != k) {
        return Err(FormatError::Ragged);
    }
    let mut out = format!("{} {} {}\n", canon.point_count(), canon.block_count(), k);
    for block in canon.blocks() {
        out.push_str(&join(block));
        out.push('\n');
    }
    Ok(out)
}

/// Reads a design file into an incidence structure, preserving block order.
pub fn read_design(text: &str) -> Result<IncidenceStructure, FormatError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let head = numbers(hl, header)?;
    let [v, b, k] = head[..] else {
        return Err(parse_err(hl, "header must be `v b k`"));
    };
    let mut blocks = Vec::with_capacity(b);
    for (ln, line) in lines {
        if blocks.len() == b {
            return Err(parse_err(ln, format!("more than {b} blocks")));
        }
        let block = numbers(ln, line)?;
        if block.len() != k {
            return Err(parse_err(
                ln,
                format!("block has {} points, header says {k}", block.len()),
            ));
        }
        blocks.push(block);
    }
    if blocks.len() != b {
        return Err(parse_err(
            text.lines().count(),
            format!("expected {b} blocks, found {}", blocks.len()),
        ));
    }
    Ok(IncidenceStructure::new(v, blocks)?)
}

/// Reads and validates a Steiner design file.
pub fn read_steiner(text: &str) -> Result<SteinerDesign, FormatError> {
    let s = read_design(text)?;
    Ok(SteinerDesign::validate(s.point_count(), s.into_blocks())?)
}

pub fn write_resolution(resolution: &Resolution) -> String {
    let classes = resolution.classes();
    let n = classes.first().map_or(0, |c| c.len());
    let mut out = format!("{} {}\n", classes.len(), n);
    for c in classes {
        out.push_str(&join(c.blocks()));
        out.push('\n');
    }
    out
}

/// Resolution files joined by blank lines.
pub fn write_family(family: &[Resolution]) -> String {
    family
        .iter()
        .map(write_resolution)
        .collect::<Vec<_>>()
        .join("\n")
}

/// Reads one or more concatenated resolution files.
pub fn read_family(design: &SteinerDesign, text: &str) -> Result<Vec<Resolution>, FormatError> {
    let mut lines = content_lines(text).peekable();
    let mut family = Vec::new();
    while let Some((hl, header)) = lines.next() {
        let head = numbers(hl, header)?;
        let [r, n] = head[..] else {
            return Err(parse_err(hl, "resolution header must be `r n`"));
        };
        let mut classes = Vec::with_capacity(r);
        for _ in 0..r {
            let (ln, line) = lines
                .next()
                .ok_or_else(|| parse_err(hl, format!("resolution needs {r} classes")))?;
            let class = numbers(ln, line)?;
            if class.len() != n {
                return Err(parse_err(
                    ln,
                    format!("class has {} blocks, header says {n}", class.len()),
                ));
            }
            classes.push(class);
        }
        family.push(Resolution::new(design, classes)?);
    }
    Ok(family)
}

pub fn write_index_list(indices: &[usize]) -> String {
    let mut sorted = indices.to_vec();
    sorted.sort_unstable();
    sorted.iter().map(|i| format!("{i}\n")).collect()
}

pub fn read_index_list(text: &str) -> Result<Vec<usize>, FormatError> {
    let mut out = Vec::new();
    for (ln, line) in content_lines(text) {
        let nums = numbers(ln, line)?;
        if nums.len() != 1 {
            return Err(parse_err(ln, "expected one index per line"));
        }
        out.push(nums[0]);
    }
    out.sort_unstable();
    Ok(out)
}
