//! Text formats for point sets and word lists.
//!
//! One point per line; blank lines and lines starting with `#` are ignored.
//! Real vectors are whitespace-separated decimals and complex scalars are
//! `re im`. Word files start with an `N=<k>` header followed by one word per
//! line in the [`parse_word`] syntax.

use crate::error::{Error, Result};
use crate::free_group::{parse_word, GroupWord};
use crate::kernel::{Domain, Point};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_numbers(line_no: usize, line: &str) -> Result<Vec<f64>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parse(format!("line {line_no}: bad number {tok:?}")))
        })
        .collect()
}

/// Parses the `N=<k>` header line of a word file.
pub fn parse_rank_header(line: &str) -> Result<usize> {
    line.trim()
        .strip_prefix("N=")
        .and_then(|k| k.trim().parse().ok())
        .ok_or_else(|| Error::Parse(format!("expected header N=<k>, got {line:?}")))
}

pub fn parse_words(text: &str) -> Result<Vec<GroupWord>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.starts_with('#'));
    let rank = loop {
        match lines.next() {
            Some((_, "")) => continue,
            Some((_, header)) => break parse_rank_header(header)?,
            None => return Err(Error::Parse("missing N=<k> header".to_string())),
        }
    };
    // After the header an empty line is the identity only when written as "e".
    lines
        .filter(|(_, l)| !l.is_empty())
        .map(|(no, l)| {
            parse_word(l, rank).map_err(|e| match e {
                Error::Parse(msg) => Error::Parse(format!("line {no}: {msg}")),
                other => other,
            })
        })
        .collect()
}

pub fn parse_points(text: &str, domain: Domain) -> Result<Vec<Point>> {
    let points: Vec<Point> = match domain {
        Domain::GroupWord => parse_words(text)?.into_iter().map(Point::Word).collect(),
        Domain::ComplexScalar => content_lines(text)
            .map(|(no, line)| match parse_numbers(no, line)?.as_slice() {
                [re, im] => Ok(Point::complex(*re, *im)),
                other => Err(Error::Parse(format!(
                    "line {no}: complex scalar needs 2 numbers, got {}",
                    other.len()
                ))),
            })
            .collect::<Result<_>>()?,
        Domain::RealVector => {
            let mut dim = None;
            content_lines(text)
                .map(|(no, line)| {
                    let v = parse_numbers(no, line)?;
                    match dim {
                        None => dim = Some(v.len()),
                        Some(d) if d != v.len() => {
                            return Err(Error::DimensionMismatch {
                                left: d,
                                right: v.len(),
                            })
                        }
                        _ => {}
                    }
                    Ok(Point::Real(v))
                })
                .collect::<Result<_>>()?
        }
    };
    if points.is_empty() {
        return Err(Error::Parse("no points".to_string()));
    }
    Ok(points)
}
