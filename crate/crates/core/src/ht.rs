//! The ".ht" hypermatrix text format and the vertex-set archive built on it.
//!
//! ```text
//! ht1
//! order 3
//! dims 3 3 3
//! 1 0 0
//! ...
//! ```
//!
//! `#` starts a comment; the parser accepts arbitrary whitespace between
//! tokens. Scalars are integers or `p/q` with q > 0.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Rational};
use crate::tensor::Tensor;

struct Token<'a> {
    text: &'a str,
    line: usize,
    col: usize,
}

struct Tokens<'a> {
    toks: std::vec::IntoIter<Token<'a>>,
    last_line: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Tokens<'a> {
        let mut toks = Vec::new();
        let mut last_line = 1;
        for (lno, raw) in text.lines().enumerate() {
            last_line = lno + 1;
            let line = match raw.find('#') {
                Some(h) => &raw[..h],
                None => raw,
            };
            let mut col = 1;
            for piece in line.split_whitespace() {
                // byte offsets are fine: the format is ASCII
                let at = line[col - 1..].find(piece).unwrap() + col - 1;
                toks.push(Token {
                    text: piece,
                    line: lno + 1,
                    col: at + 1,
                });
                col = at + piece.len() + 1;
                if col > line.len() {
                    break;
                }
            }
        }
        Tokens {
            toks: toks.into_iter(),
            last_line,
        }
    }

    fn next(&mut self, expect: &str) -> Result<Token<'a>> {
        self.toks
            .next()
            .ok_or_else(|| Error::parse(self.last_line, 1, format!("unexpected end of input, expected {expect}")))
    }

    fn next_keyword(&mut self, kw: &str) -> Result<()> {
        let tok = self.next(kw)?;
        if tok.text != kw {
            return Err(Error::parse(
                tok.line,
                tok.col,
                format!("expected {:?}, found {:?}", kw, tok.text),
            ));
        }
        Ok(())
    }

    fn next_usize(&mut self, what: &str) -> Result<usize> {
        let tok = self.next(what)?;
        tok.text.parse().map_err(|_| {
            Error::parse(
                tok.line,
                tok.col,
                format!("expected {what}, found {:?}", tok.text),
            )
        })
    }

    fn next_scalar(&mut self) -> Result<Rational> {
        let tok = self.next("a scalar")?;
        parse_rational(tok.text).ok_or_else(|| {
            Error::parse(
                tok.line,
                tok.col,
                format!("expected integer or p/q with q>0, found {:?}", tok.text),
            )
        })
    }

    fn finish(mut self) -> Result<()> {
        if let Some(tok) = self.toks.next() {
            return Err(Error::parse(
                tok.line,
                tok.col,
                format!("trailing input {:?}", tok.text),
            ));
        }
        Ok(())
    }
}

fn parse_tensor_body(toks: &mut Tokens) -> Result<Tensor> {
    toks.next_keyword("ht1")?;
    toks.next_keyword("order")?;
    let order = toks.next_usize("the order")?;
    if order == 0 {
        return Err(Error::ZeroExtent);
    }
    toks.next_keyword("dims")?;
    let mut dims = Vec::with_capacity(order);
    for _ in 0..order {
        dims.push(toks.next_usize("an extent")?);
    }
    if dims.iter().any(|&n| n == 0) {
        return Err(Error::ZeroExtent);
    }
    let len: usize = dims.iter().product();
    let mut entries = Vec::with_capacity(len);
    for _ in 0..len {
        entries.push(toks.next_scalar()?);
    }
    Tensor::new(dims, entries)
}

pub fn parse(text: &str) -> Result<Tensor> {
    let mut toks = Tokens::new(text);
    let t = parse_tensor_body(&mut toks)?;
    toks.finish()?;
    Ok(t)
}

pub fn to_text(t: &Tensor) -> String {
    let mut out = String::new();
    writeln!(out, "ht1").unwrap();
    writeln!(out, "order {}", t.order()).unwrap();
    let dims: Vec<String> = t.dims().iter().map(|n| n.to_string()).collect();
    writeln!(out, "dims {}", dims.join(" ")).unwrap();
    let d = t.order();
    let row = t.dims()[d - 1];
    let slice = if d >= 2 { row * t.dims()[d - 2] } else { row };
    for (pos, e) in t.entries().iter().enumerate() {
        if pos > 0 {
            if pos % slice == 0 && d >= 3 {
                out.push('\n');
            }
            if pos % row == 0 {
                out.push('\n');
            } else {
                out.push(' ');
            }
        }
        write!(out, "{e}").unwrap();
    }
    out.push('\n');
    out
}

/// Archive of tensors: `vertexset <count>` followed by numbered .ht blocks.
pub fn vertexset_to_text(tensors: &[Tensor]) -> String {
    let mut out = String::new();
    writeln!(out, "vertexset {}", tensors.len()).unwrap();
    for (pos, t) in tensors.iter().enumerate() {
        writeln!(out, "\n# vertex {}", pos + 1).unwrap();
        out.push_str(&to_text(t));
    }
    out
}

pub fn parse_vertexset(text: &str) -> Result<Vec<Tensor>> {
    let mut toks = Tokens::new(text);
    toks.next_keyword("vertexset")?;
    let count = toks.next_usize("the tensor count")?;
    let mut tensors = Vec::with_capacity(count);
    for _ in 0..count {
        tensors.push(parse_tensor_body(&mut toks)?);
    }
    toks.finish()?;
    Ok(tensors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    #[test]
    fn parses_canonical_file() {
        let text = "ht1\norder 3\ndims 2 2 2\n1 0\n0 1\n\n0 1\n1 0\n";
        let b = parse(text).unwrap();
        assert_eq!(b.dims(), &[2, 2, 2]);
        assert_eq!(b.get(&[1, 1, 1]), &int(1));
        assert_eq!(b.get(&[2, 2, 2]), &int(0));
    }

    #[test]
    fn accepts_comments_and_ragged_whitespace() {
        let text = "# a tensor\n  ht1   # magic\norder 2\ndims 2 2 # extents\n 1 2/4\n\t3   -4/2\n";
        let t = parse(text).unwrap();
        assert_eq!(t.get(&[1, 2]), &ratio(1, 2));
        assert_eq!(t.get(&[2, 2]), &int(-2));
    }

    #[test]
    fn reports_line_and_column() {
        let text = "ht1\norder 2\ndims 2 2\n1 2 x 4\n";
        match parse(text) {
            Err(Error::Parse { line, col, .. }) => {
                assert_eq!(line, 4);
                assert_eq!(col, 5);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_truncated_and_trailing() {
        assert!(parse("ht1\norder 2\ndims 2 2\n1 2 3\n").is_err());
        assert!(parse("ht1\norder 2\ndims 2 2\n1 2 3 4 5\n").is_err());
        assert!(parse("ht2\norder 1\ndims 1\n0\n").is_err());
        assert!(parse("ht1\norder 2\ndims 2 2\n1 2 3 1/0\n").is_err());
        assert!(parse("ht1\norder 0\ndims\n").is_err());
    }

    #[test]
    fn roundtrip_exact() {
        let t = Tensor::new(
            vec![2, 3],
            vec![
                ratio(1, 3),
                int(-7),
                ratio(22, 7),
                int(0),
                ratio(-5, 2),
                int(9),
            ],
        )
        .unwrap();
        assert_eq!(parse(&to_text(&t)).unwrap(), t);
        let i3 = Tensor::identity(3, 3);
        assert_eq!(parse(&to_text(&i3)).unwrap(), i3);
        let v = Tensor::new(vec![4], vec![int(1), int(2), int(3), int(4)]).unwrap();
        assert_eq!(parse(&to_text(&v)).unwrap(), v);
    }

    #[test]
    fn vertexset_roundtrip() {
        let set = vec![Tensor::identity(2, 3), Tensor::ones(2, 3).scale(&ratio(1, 2))];
        let text = vertexset_to_text(&set);
        assert!(text.starts_with("vertexset 2\n"));
        assert_eq!(parse_vertexset(&text).unwrap(), set);
        assert!(parse_vertexset("vertexset 1\n").is_err());
    }
}
