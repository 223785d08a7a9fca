//! Group specifications on the command line.
//!
//! Two forms are accepted, with whitespace ignored anywhere:
//!
//! ```text
//! 2,4,4
//! C2xC4xC4
//! ```

use thiserror::Error;
use zerosum_core::AbelianGroup;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("empty group specification")]
    Empty,
    #[error("unexpected {found:?} at position {position}, expected {expected}")]
    Syntax {
        position: usize,
        found: char,
        expected: &'static str,
    },
    #[error("specification ends early, expected {expected}")]
    Truncated { expected: &'static str },
    #[error("factor {value} at position {position} must be at least 2")]
    FactorTooSmall { position: usize, value: u64 },
    #[error("factor at position {position} does not fit in 64 bits")]
    Overflow { position: usize },
    #[error(transparent)]
    Group(#[from] zerosum_core::Error),
}

struct Cursor<'a> {
    chars: Vec<(usize, char)>,
    at: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        let chars = src
            .chars()
            .enumerate()
            .filter(|(_, c)| !c.is_whitespace())
            .collect();
        Cursor { chars, at: 0, _src: src }
    }

    fn peek(&self) -> Option<(usize, char)> {
        self.chars.get(self.at).copied()
    }

    fn done(&self) -> bool {
        self.at == self.chars.len()
    }

    fn expect(&mut self, want: impl Fn(char) -> bool, expected: &'static str) -> Result<(), SpecError> {
        match self.peek() {
            Some((_, c)) if want(c) => {
                self.at += 1;
                Ok(())
            }
            Some((position, found)) => Err(SpecError::Syntax { position, found, expected }),
            None => Err(SpecError::Truncated { expected }),
        }
    }

    fn number(&mut self) -> Result<u64, SpecError> {
        let start = match self.peek() {
            Some((p, c)) if c.is_ascii_digit() => p,
            Some((position, found)) => {
                return Err(SpecError::Syntax { position, found, expected: "a digit" })
            }
            None => return Err(SpecError::Truncated { expected: "a digit" }),
        };
        let mut value: u64 = 0;
        while let Some((_, c)) = self.peek() {
            let Some(digit) = c.to_digit(10) else { break };
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(digit as u64))
                .ok_or(SpecError::Overflow { position: start })?;
            self.at += 1;
        }
        if value < 2 {
            return Err(SpecError::FactorTooSmall { position: start, value });
        }
        Ok(value)
    }
}

/// Parse the cyclic factors without normalising them.
pub fn parse_factors(text: &str) -> Result<Vec<u64>, SpecError> {
    let mut cur = Cursor::new(text);
    let cyclic_form = match cur.peek() {
        None => return Err(SpecError::Empty),
        Some((_, c)) => c == 'C' || c == 'c',
    };
    let mut factors = Vec::new();
    loop {
        if cyclic_form {
            cur.expect(|c| c == 'C' || c == 'c', "'C'")?;
        }
        factors.push(cur.number()?);
        if cur.done() {
            return Ok(factors);
        }
        if cyclic_form {
            cur.expect(|c| c == 'x' || c == 'X' || c == '×', "'x'")?;
        } else {
            cur.expect(|c| c == ',', "','")?;
        }
    }
}

/// Parse and normalise to invariant factors.
pub fn parse_group_spec(text: &str) -> Result<AbelianGroup, SpecError> {
    Ok(AbelianGroup::new(&parse_factors(text)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_forms() {
        assert_eq!(parse_group_spec("2,4").unwrap().invariant_factors(), &[2, 4]);
        assert_eq!(parse_group_spec("C4xC6").unwrap().invariant_factors(), &[2, 12]);
        assert_eq!(parse_group_spec(" c2 X c2 x C4 ").unwrap().invariant_factors(), &[2, 2, 4]);
        assert_eq!(parse_group_spec("4, 2").unwrap().invariant_factors(), &[2, 4]);
        assert_eq!(parse_group_spec("6").unwrap().invariant_factors(), &[6]);
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse_group_spec("1"), Err(SpecError::FactorTooSmall { position: 0, value: 1 }));
        assert_eq!(parse_group_spec(""), Err(SpecError::Empty));
        assert_eq!(
            parse_group_spec("2,,4"),
            Err(SpecError::Syntax { position: 2, found: ',', expected: "a digit" })
        );
        assert_eq!(
            parse_group_spec("C2xD4"),
            Err(SpecError::Syntax { position: 3, found: 'D', expected: "'C'" })
        );
        assert_eq!(parse_group_spec("2,"), Err(SpecError::Truncated { expected: "a digit" }));
        assert_eq!(
            parse_group_spec("2;4"),
            Err(SpecError::Syntax { position: 1, found: ';', expected: "','" })
        );
        assert_eq!(parse_group_spec("2 4").unwrap().invariant_factors(), &[24]);
        assert!(matches!(parse_group_spec("99999999999999999999"), Err(SpecError::Overflow { .. })));
        assert!(matches!(parse_group_spec("1000,1000,1000"), Err(SpecError::Group(_))));
    }
}
