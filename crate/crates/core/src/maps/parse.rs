use thiserror::Error;

use super::{validate, Branch, MapDescriptor, MapError, PxrDescriptor, RawMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error(transparent)]
    Invalid(#[from] MapError),
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            position: self.pos,
            message: message.into(),
        })
    }

    fn expect(&mut self, lit: &str) -> Result<(), ParseError> {
        if self.text[self.pos..].starts_with(lit) {
            self.pos += lit.len();
            Ok(())
        } else {
            self.err(format!("expected `{lit}`"))
        }
    }

    fn integer(&mut self, signed: bool) -> Result<i64, ParseError> {
        let rest = &self.text[self.pos..];
        let sign_len = usize::from(signed && rest.starts_with('-'));
        let digits = rest[sign_len..]
            .bytes()
            .take_while(|b| b.is_ascii_digit())
            .count();
        if digits == 0 {
            return self.err("expected an integer");
        }
        let len = sign_len + digits;
        match rest[..len].parse::<i64>() {
            Ok(v) => {
                self.pos += len;
                Ok(v)
            }
            Err(_) => self.err("integer out of range"),
        }
    }

    fn unsigned(&mut self) -> Result<u64, ParseError> {
        let start = self.pos;
        let v = self.integer(false)?;
        u64::try_from(v).or_else(|_| {
            self.pos = start;
            self.err("expected a non-negative integer")
        })
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.pos == self.text.len() {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }
}

/// Parses `collatz`, `pxr:p=<int>,r=<int>` or
/// `d=<int>;m0=<int>,r0=<int>;…` (exactly `d` branches, indices in order).
pub fn parse_descriptor(text: &str) -> Result<MapDescriptor, ParseError> {
    let mut cur = Cursor { text, pos: 0 };
    if text == "collatz" {
        return Ok(MapDescriptor::collatz());
    }
    if text.starts_with("pxr:") {
        cur.expect("pxr:p=")?;
        let p = cur.integer(true)?;
        cur.expect(",r=")?;
        let r = cur.integer(true)?;
        cur.finish()?;
        return Ok(PxrDescriptor::new(p, r)?.to_map());
    }
    if !text.starts_with("d=") {
        return cur.err("expected `collatz`, `pxr:` or `d=`");
    }
    cur.expect("d=")?;
    let d = cur.unsigned()?;
    if d < 2 {
        return Err(MapError::BadModulus(d).into());
    }
    let mut branches = Vec::new();
    for i in 0..d {
        cur.expect(&format!(";m{i}="))?;
        let m = cur.unsigned()?;
        cur.expect(&format!(",r{i}="))?;
        let r = cur.integer(true)?;
        branches.push(Branch::new(m, r));
    }
    cur.finish()?;
    Ok(validate(RawMap {
        modulus: d,
        branches,
    })?)
}
