//! Recursive-descent parser for function literals used by tests and the CLI.
//!
//! Precedence, loosest first: `+`, `^`, AND (juxtaposition or `*`),
//! postfix `'`.

use super::TruthTable;
use crate::{Error, Result};

pub(super) fn parse_expr(src: &str, num_vars: usize) -> Result<TruthTable> {
    // Validate the universe before touching the input.
    TruthTable::zero(num_vars)?;
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        num_vars,
    };
    let t = p.or()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(t)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    num_vars: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            line: 1,
            msg: format!("{msg} at column {}", self.pos + 1),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn or(&mut self) -> Result<TruthTable> {
        let mut acc = self.xor()?;
        while self.peek() == Some(b'+') {
            self.pos += 1;
            acc = &acc | &self.xor()?;
        }
        Ok(acc)
    }

    fn xor(&mut self) -> Result<TruthTable> {
        let mut acc = self.and()?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            acc = &acc ^ &self.and()?;
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<TruthTable> {
        let mut acc = self.postfix()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc & &self.postfix()?;
                }
                Some(b'x' | b'0' | b'1' | b'(') => acc = &acc & &self.postfix()?,
                _ => return Ok(acc),
            }
        }
    }

    fn postfix(&mut self) -> Result<TruthTable> {
        let mut t = self.primary()?;
        while self.peek() == Some(b'\'') {
            self.pos += 1;
            t = !t;
        }
        Ok(t)
    }

    fn primary(&mut self) -> Result<TruthTable> {
        match self.peek() {
            Some(b'0') => {
                self.pos += 1;
                TruthTable::zero(self.num_vars)
            }
            Some(b'1') => {
                self.pos += 1;
                TruthTable::one(self.num_vars)
            }
            Some(b'(') => {
                self.pos += 1;
                let t = self.or()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(t)
            }
            Some(b'x') => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if start == self.pos {
                    return Err(self.err("expected variable index after 'x'"));
                }
                let idx: usize = std::str::from_utf8(&self.src[start..self.pos])
                    .ok()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| self.err("bad variable index"))?;
                if idx >= self.num_vars {
                    return Err(self.err(&format!(
                        "variable x{idx} outside a universe of {} variables",
                        self.num_vars
                    )));
                }
                TruthTable::var(self.num_vars, idx)
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(expr: &str, n: usize) -> String {
        let t = parse_expr(expr, n).unwrap();
        (0..t.len())
            .map(|p| if t.get(p) { '1' } else { '0' })
            .collect()
    }

    #[test]
    fn precedence() {
        // a + b c  ==  a + (b c)
        assert_eq!(eval("x0 + x1 x2", 3), eval("x0 + (x1*x2)", 3));
        // a ^ b c  ==  a ^ (b c)
        assert_eq!(eval("x0 ^ x1x2", 3), eval("x0 ^ (x1 x2)", 3));
        // a + b ^ c  ==  a + (b ^ c)
        assert_eq!(eval("x0 + x1 ^ x2", 3), eval("x0 + (x1 ^ x2)", 3));
        // (a b)'  vs  a b'
        assert_ne!(eval("(x0x1)'", 2), eval("x0x1'", 2));
        assert_eq!(eval("x0''", 1), eval("x0", 1));
    }

    #[test]
    fn constants() {
        assert_eq!(eval("0", 2), "0000");
        assert_eq!(eval("1", 2), "1111");
        assert_eq!(eval("1'", 1), "00");
        assert_eq!(eval("x0 1", 1), "01");
    }

    #[test]
    fn errors() {
        assert!(parse_expr("x2", 2).is_err());
        assert!(parse_expr("x0 +", 2).is_err());
        assert!(parse_expr("(x0", 2).is_err());
        assert!(parse_expr("x", 2).is_err());
        assert!(parse_expr("x0 ]", 2).is_err());
        assert!(parse_expr("x0", 17).is_err());
    }
}
