use hadamard::{BookPoint, Euclidean, EuclideanPoint, GeodesicSpace, OpenBook, SpdMatrix, SpdSpace};

use crate::CliError;

/// Points read from a point-list file, together with their space.
#[derive(Debug, Clone)]
pub enum PointSet {
    Euclidean(Euclidean, Vec<EuclideanPoint>),
    Spd(SpdSpace, Vec<SpdMatrix>),
    Book(OpenBook, Vec<BookPoint>),
}

impl PointSet {
    pub fn len(&self) -> usize {
        match self {
            PointSet::Euclidean(_, p) => p.len(),
            PointSet::Spd(_, p) => p.len(),
            PointSet::Book(_, p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn numbers(line: &str, lineno: usize) -> Result<Vec<f64>, CliError> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<f64>()
                .map_err(|_| CliError::Validation(format!("line {lineno}: '{tok}' is not a number")))
        })
        .collect()
}

fn expect_len(v: &[f64], n: usize, lineno: usize) -> Result<(), CliError> {
    if v.len() != n {
        return Err(CliError::Validation(format!("line {lineno}: expected {n} numbers, found {}", v.len())));
    }
    Ok(())
}

fn header_arg(parts: &[&str], i: usize, what: &str, lineno: usize) -> Result<usize, CliError> {
    parts
        .get(i)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| CliError::Validation(format!("line {lineno}: header needs {what}")))
}

/// Parses a point list.
///
/// ```text
/// space euclidean <dim>          then <dim> coordinates per line
/// space spd <dim>                then <dim>² entries per line, row-major
/// space book <sheets> <spine>    then `sheet t x_1 … x_spine` per line
/// ```
///
/// Blank lines and text after `#` are ignored.
pub fn parse_points(text: &str) -> Result<PointSet, CliError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (lineno, header) = lines
        .next()
        .ok_or_else(|| CliError::Validation("point list is empty".into()))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.first() != Some(&"space") {
        return Err(CliError::Validation(format!("line {lineno}: expected a 'space …' header")));
    }
    let set = match parts.get(1).copied() {
        Some("euclidean") => {
            let dim = header_arg(&parts, 2, "a dimension", lineno)?;
            let mut pts = Vec::new();
            for (no, l) in lines {
                let v = numbers(l, no)?;
                expect_len(&v, dim, no)?;
                pts.push(EuclideanPoint(v));
            }
            PointSet::Euclidean(Euclidean::new(dim), pts)
        }
        Some("spd") => {
            let dim = header_arg(&parts, 2, "a dimension", lineno)?;
            let space = SpdSpace::new(dim);
            let mut pts = Vec::new();
            for (no, l) in lines {
                let v = numbers(l, no)?;
                expect_len(&v, dim * dim, no)?;
                let m = SpdMatrix::from_row_slice(dim, &v)
                    .map_err(|e| CliError::Validation(format!("line {no}: {e}")))?;
                pts.push(m);
            }
            PointSet::Spd(space, pts)
        }
        Some("book") => {
            let sheets = header_arg(&parts, 2, "a sheet count", lineno)?;
            let spine = header_arg(&parts, 3, "a spine dimension", lineno)?;
            let space = OpenBook::new(sheets, spine)?;
            let mut pts = Vec::new();
            for (no, l) in lines {
                let v = numbers(l, no)?;
                expect_len(&v, spine + 2, no)?;
                if v[0].fract() != 0.0 || v[0] < 1.0 {
                    return Err(CliError::Validation(format!("line {no}: sheet must be a positive integer")));
                }
                let p = BookPoint::new(v[0] as usize, v[1], v[2..].to_vec())
                    .and_then(|p| space.validate(&p).map(|_| p))
                    .map_err(|e| CliError::Validation(format!("line {no}: {e}")))?;
                pts.push(p);
            }
            PointSet::Book(space, pts)
        }
        other => {
            return Err(CliError::Validation(format!(
                "line {lineno}: unknown space '{}'",
                other.unwrap_or("")
            )))
        }
    };
    if set.is_empty() {
        return Err(CliError::Validation("point list has no points".into()));
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_space() {
        let e = parse_points("space euclidean 2\n1 2\n3 4 # trailing\n\n").unwrap();
        assert!(matches!(e, PointSet::Euclidean(_, ref p) if p.len() == 2));
        let s = parse_points("space spd 2\n2 0 0 3\n1 0.5 0.5 1\n").unwrap();
        assert_eq!(s.len(), 2);
        let b = parse_points("# book\nspace book 3 1\n1 0.5 10\n2 0 4\n").unwrap();
        match b {
            PointSet::Book(_, p) => assert!(p[1].on_spine()),
            _ => panic!("expected a book"),
        }
    }

    #[test]
    fn errors_name_the_line() {
        let err = parse_points("space euclidean 2\n1 2\n1 x\n").unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");
        let err = parse_points("space spd 2\n1 2 2 1\n").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
        assert!(parse_points("space book 3 1\n4 1 0\n").is_err());
        assert!(parse_points("space torus 2\n").is_err());
        assert!(parse_points("space euclidean 2\n").is_err());
        assert!(parse_points("").is_err());
    }
}
