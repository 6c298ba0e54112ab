//! Text formats.
//!
//! * COO: one `i j value` triple per line, whitespace separated, 1-based,
//!   lines starting with `#` ignored. Also used for contact counts.
//! * Dense CSV: `p` rows of `p` comma-separated numbers, no header.
//! * Genotype CSV: one row per sample, one column per locus, `0`/`1`/`2`/`NA`.
//! * Merge table: `p - 1` lines `left right height` with signed references
//!   (`-i` is leaf `i`, `t` is merge `t`, both 1-based).
//! * Labels: `index label` lines, 1-based indices.

use std::io::{BufRead, Write};

use crate::band::{BandMatrix, ContactMatrix, GenotypeMatrix};
use crate::dendrogram::{Dendrogram, NodeRef};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::scalar::Scalar;

/// Significant digits used for heights in merge tables.
pub const HEIGHT_DIGITS: usize = 12;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn io_err(e: std::io::Error) -> Error {
    parse_err(0, e.to_string())
}

fn content_lines<R: BufRead>(r: R) -> impl Iterator<Item = Result<(usize, String)>> {
    r.lines().enumerate().filter_map(|(n, l)| match l {
        Err(e) => Some(Err(io_err(e))),
        Ok(l) => {
            let t = l.trim();
            if t.is_empty() || t.starts_with('#') {
                None
            } else {
                Some(Ok((n + 1, t.to_string())))
            }
        }
    })
}

fn parse_num<T: Scalar>(tok: &str, line: usize) -> Result<T> {
    let v: f64 = tok
        .parse()
        .map_err(|_| parse_err(line, format!("invalid number {tok:?}")))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("non-finite value {tok:?}")));
    }
    Ok(T::from_f64_lossy(v))
}

fn parse_index(tok: &str, line: usize) -> Result<usize> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid index {tok:?}")))
}

/// Formats like C's `%.{digits}g`.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let m = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn read_coo<T: Scalar, R: BufRead>(r: R) -> Result<Vec<(usize, usize, T)>> {
    let mut out = Vec::new();
    for item in content_lines(r) {
        let (n, line) = item?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(parse_err(
                n,
                format!("expected 3 fields, got {}", toks.len()),
            ));
        }
        out.push((
            parse_index(toks[0], n)?,
            parse_index(toks[1], n)?,
            parse_num(toks[2], n)?,
        ));
    }
    Ok(out)
}

/// Largest index appearing in a triplet list.
pub fn coo_extent<T>(triplets: &[(usize, usize, T)]) -> usize {
    triplets.iter().map(|t| t.0.max(t.1)).max().unwrap_or(0)
}

pub fn write_coo<T: Scalar, W: Write>(m: &BandMatrix<T>, mut w: W) -> std::io::Result<()> {
    for (i, j, v) in m.to_coo() {
        writeln!(w, "{i} {j} {v}")?;
    }
    Ok(())
}

pub fn read_dense_csv<T: Scalar, R: BufRead>(r: R) -> Result<Vec<Vec<T>>> {
    let mut rows = Vec::new();
    for item in content_lines(r) {
        let (n, line) = item?;
        let row = line
            .split(',')
            .map(|tok| parse_num(tok.trim(), n))
            .collect::<Result<Vec<T>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

pub fn write_dense_csv<T: Scalar, W: Write>(m: &BandMatrix<T>, mut w: W) -> std::io::Result<()> {
    for row in m.to_dense() {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn read_genotype_csv<R: BufRead>(r: R) -> Result<GenotypeMatrix> {
    let mut rows = Vec::new();
    for item in content_lines(r) {
        let (n, line) = item?;
        let row = line
            .split(',')
            .map(|tok| match tok.trim() {
                "NA" | "na" | "" => Ok(None),
                "0" => Ok(Some(0)),
                "1" => Ok(Some(1)),
                "2" => Ok(Some(2)),
                other => Err(parse_err(n, format!("invalid dosage {other:?}"))),
            })
            .collect::<Result<Vec<Option<u8>>>>()?;
        rows.push(row);
    }
    GenotypeMatrix::new(rows)
}

/// Reads `i j count` triplets into a contact matrix; `p` defaults to the
/// largest index present.
pub fn read_contacts<T: Scalar, R: BufRead>(r: R, p: Option<usize>) -> Result<ContactMatrix<T>> {
    let triplets = read_coo::<T, _>(r)?;
    let p = p.unwrap_or_else(|| coo_extent(&triplets));
    ContactMatrix::from_triplets(p, &triplets)
}

pub fn write_merges<T: Scalar, W: Write>(d: &Dendrogram<T>, mut w: W) -> std::io::Result<()> {
    for m in d.merges() {
        writeln!(
            w,
            "{} {} {}",
            m.left,
            m.right,
            format_sig(m.height.to_f64_lossy(), HEIGHT_DIGITS)
        )?;
    }
    Ok(())
}

pub fn write_heights<T: Scalar, W: Write>(d: &Dendrogram<T>, mut w: W) -> std::io::Result<()> {
    for m in d.merges() {
        writeln!(w, "{}", format_sig(m.height.to_f64_lossy(), HEIGHT_DIGITS))?;
    }
    Ok(())
}

/// Reads a merge table; `p` is the number of records plus one.
pub fn read_merges<T: Scalar, R: BufRead>(r: R) -> Result<Dendrogram<T>> {
    let mut records = Vec::new();
    for item in content_lines(r) {
        let (n, line) = item?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(parse_err(
                n,
                format!("expected 3 fields, got {}", toks.len()),
            ));
        }
        let node = |tok: &str| -> Result<NodeRef> {
            tok.parse::<i64>()
                .ok()
                .and_then(NodeRef::from_signed)
                .ok_or_else(|| parse_err(n, format!("invalid node reference {tok:?}")))
        };
        records.push((node(toks[0])?, node(toks[1])?, parse_num(toks[2], n)?));
    }
    Dendrogram::from_records(records.len() + 1, &records)
}

pub fn write_labels<W: Write>(part: &Partition, mut w: W) -> std::io::Result<()> {
    for (i, l) in part.labels().iter().enumerate() {
        writeln!(w, "{} {}", i + 1, l)?;
    }
    Ok(())
}

/// Reads `index label` lines; indices must be exactly `1..=p` in order.
pub fn read_labels<R: BufRead>(r: R) -> Result<Partition> {
    let mut labels = Vec::new();
    for item in content_lines(r) {
        let (n, line) = item?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(parse_err(
                n,
                format!("expected 2 fields, got {}", toks.len()),
            ));
        }
        let idx = parse_index(toks[0], n)?;
        if idx != labels.len() + 1 {
            return Err(parse_err(
                n,
                format!("expected index {}, got {idx}", labels.len() + 1),
            ));
        }
        labels.push(parse_index(toks[1], n)?);
    }
    Partition::new(labels)
}
