//! Plain-text tree files.
//!
//! ```text
//! # optional comments
//! n rho
//! u v lo hi      (n - 1 lines)
//! ```
//!
//! Numbers are nonnegative integers or fractions `p/q`. When fractions are
//! present every number in the file is multiplied by the least common
//! multiple of the denominators so the core can stay integer-exact.

use thiserror::Error;

use crate::error::Error;
use crate::tree::{Tree, Vertex, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("expected {expected} edge lines, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("numbers overflow after scaling fractions to a common denominator")]
    Overflow,
    #[error("empty input: missing `n rho` header")]
    MissingHeader,
    #[error(transparent)]
    Tree(#[from] Error),
}

/// A parsed instance. `scale` is the factor applied to every number in the
/// file (1 when it held only integers).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeFile {
    pub tree: Tree,
    pub rho: Weight,
    pub scale: Weight,
}

#[derive(Debug, Clone, Copy)]
struct Fraction {
    num: i64,
    den: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn number(tok: &str, line: usize) -> Result<Fraction, ParseError> {
    let bad = |what: &str| ParseError::Syntax {
        line,
        msg: format!("{what} `{tok}`"),
    };
    let (p, q) = match tok.split_once('/') {
        Some((p, q)) => (p, q),
        None => (tok, "1"),
    };
    let num: i64 = p.parse().map_err(|_| bad("not a number"))?;
    let den: i64 = q.parse().map_err(|_| bad("bad denominator in"))?;
    if den <= 0 {
        return Err(bad("nonpositive denominator in"));
    }
    if num < 0 {
        return Err(bad("negative value"));
    }
    let g = gcd(num, den).max(1);
    Ok(Fraction {
        num: num / g,
        den: den / g,
    })
}

fn vertex(tok: &str, line: usize) -> Result<Vertex, ParseError> {
    tok.parse().map_err(|_| ParseError::Syntax {
        line,
        msg: format!("bad vertex id `{tok}`"),
    })
}

/// Parses a tree file.
pub fn parse_tree_file(text: &str) -> Result<TreeFile, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let head: Vec<_> = header.split_whitespace().collect();
    if head.len() != 2 {
        return Err(ParseError::Syntax {
            line: hline,
            msg: "header must be `n rho`".into(),
        });
    }
    let n = vertex(head[0], hline)?;
    if n == 0 {
        return Err(ParseError::Syntax {
            line: hline,
            msg: "a tree needs at least one vertex".into(),
        });
    }
    let rho = number(head[1], hline)?;

    let mut raw = Vec::with_capacity(n - 1);
    for (line, l) in lines {
        let tok: Vec<_> = l.split_whitespace().collect();
        if tok.len() != 4 {
            return Err(ParseError::Syntax {
                line,
                msg: "edge lines must be `u v lo hi`".into(),
            });
        }
        raw.push((
            vertex(tok[0], line)?,
            vertex(tok[1], line)?,
            number(tok[2], line)?,
            number(tok[3], line)?,
        ));
    }
    if raw.len() != n - 1 {
        return Err(ParseError::EdgeCount {
            expected: n - 1,
            found: raw.len(),
        });
    }

    let mut scale: i64 = rho.den;
    for &(_, _, a, b) in &raw {
        for d in [a.den, b.den] {
            scale = (scale / gcd(scale, d))
                .checked_mul(d)
                .ok_or(ParseError::Overflow)?;
        }
    }
    let fix = |f: Fraction| f.num.checked_mul(scale / f.den).ok_or(ParseError::Overflow);
    let mut edges = Vec::with_capacity(raw.len());
    for &(u, v, a, b) in &raw {
        edges.push((u, v, fix(a)?, fix(b)?));
    }
    let tree = Tree::with_vertex_count(n, &edges)?;
    Ok(TreeFile {
        tree,
        rho: fix(rho)?,
        scale,
    })
}

/// Renders a tree in the file format, one edge per line in edge-id order.
pub fn write_tree_file(t: &Tree, rho: Weight) -> String {
    let mut out = format!("{} {}\n", t.n(), rho);
    for e in t.edges() {
        out.push_str(&format!(
            "{} {} {} {}\n",
            e.u,
            e.v,
            e.interval.lo(),
            e.interval.hi()
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "# two edges\n3 1\n0 1 2 6\n1 2 1 4 # tail\n";
        let f = parse_tree_file(text).unwrap();
        assert_eq!((f.tree.n(), f.rho, f.scale), (3, 1, 1));
        assert_eq!(write_tree_file(&f.tree, f.rho), "3 1\n0 1 2 6\n1 2 1 4\n");
    }

    #[test]
    fn fractions_are_scaled() {
        let f = parse_tree_file("2 1/2\n0 1 1/3 2\n").unwrap();
        assert_eq!(f.scale, 6);
        assert_eq!(f.rho, 3);
        assert_eq!((f.tree.interval(0).lo(), f.tree.interval(0).hi()), (2, 12));
    }

    #[test]
    fn single_vertex() {
        let f = parse_tree_file("1 0\n").unwrap();
        assert_eq!(f.tree.n(), 1);
        assert_eq!(write_tree_file(&f.tree, 0), "1 0\n");
    }

    #[test]
    fn errors() {
        assert_eq!(
            parse_tree_file("# nothing\n"),
            Err(ParseError::MissingHeader)
        );
        assert!(matches!(
            parse_tree_file("3 1\n0 1 2 6\n"),
            Err(ParseError::EdgeCount {
                expected: 2,
                found: 1
            })
        ));
        assert!(matches!(
            parse_tree_file("2 1\n0 1 x 6\n"),
            Err(ParseError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_tree_file("2 1\n0 1 -1 6\n"),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_tree_file("2 1\n0 1 7 6\n"),
            Err(ParseError::Tree(Error::BadInterval { .. }))
        ));
        assert!(matches!(
            parse_tree_file("2 1/0\n0 1 1 6\n"),
            Err(ParseError::Syntax { .. })
        ));
    }
}
