//! The `--state` grammar.
//!
//! ```text
//! singlet*<k>        k singlets on 2k qubits
//! singlet*<k>+0      the same, followed by one qubit in |0⟩
//! cat:<n>            |0…0⟩ + |1…1⟩
//! basis:<bits>       a computational basis state, qubit 1 first
//! random:<n>:<seed>  a Haar-random state
//! file:<path>        a JSON state file
//! ```

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use orbitscope::state::{
    make_basis, make_cat, make_singlet_product, make_singlet_product_plus_zero,
    sample_haar_state,
};
use orbitscope::{MultiIndex, PureState};

/// Largest qubit count the command line accepts.
pub const MAX_CLI_QUBITS: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StateSpec {
    Singlets { k: usize },
    SingletsPlusZero { k: usize },
    Cat { n: usize },
    Basis { bits: Vec<u8> },
    Random { n: usize, seed: u64 },
    File { path: PathBuf },
}

/// A malformed state spec. `position` is a 0-based character offset.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct SpecError {
    pub input: String,
    pub position: usize,
    pub message: String,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "invalid state spec at column {}: {}", self.position + 1, self.message)?;
        writeln!(f, "  {}", self.input)?;
        write!(f, "  {}^", " ".repeat(self.position))
    }
}

struct Cursor<'a> {
    input: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(input: &'a str) -> Self {
        Cursor { input, chars: input.chars().collect(), pos: 0 }
    }

    fn fail<T>(&self, position: usize, message: impl Into<String>) -> Result<T, SpecError> {
        Err(SpecError { input: self.input.to_string(), position, message: message.into() })
    }

    fn eat(&mut self, prefix: &str) -> bool {
        let p: Vec<char> = prefix.chars().collect();
        if self.chars[self.pos..].starts_with(&p) {
            self.pos += p.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), SpecError> {
        if self.chars.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(self.pos, format!("expected '{c}'"))
        }
    }

    fn integer(&mut self) -> Result<u64, SpecError> {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.fail(start, "expected a non-negative integer");
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        match digits.parse() {
            Ok(v) => Ok(v),
            Err(_) => self.fail(start, "integer out of range"),
        }
    }

    fn size(&mut self) -> Result<usize, SpecError> {
        let start = self.pos;
        let v = self.integer()?;
        usize::try_from(v).or_else(|_| self.fail(start, "integer out of range"))
    }

    fn rest(&mut self) -> String {
        let s = self.chars[self.pos..].iter().collect();
        self.pos = self.chars.len();
        s
    }

    fn finish(&self) -> Result<(), SpecError> {
        if self.pos < self.chars.len() {
            self.fail(self.pos, "unexpected trailing input")
        } else {
            Ok(())
        }
    }
}

impl FromStr for StateSpec {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, SpecError> {
        let mut c = Cursor::new(s);
        let spec = if c.eat("singlet*") {
            let k = c.size()?;
            if c.eat("+") {
                let at = c.pos;
                if !c.eat("0") {
                    return c.fail(at, "only '+0' may follow a singlet count");
                }
                StateSpec::SingletsPlusZero { k }
            } else {
                StateSpec::Singlets { k }
            }
        } else if c.eat("cat:") {
            StateSpec::Cat { n: c.size()? }
        } else if c.eat("basis:") {
            let start = c.pos;
            let mut bits = vec![];
            while let Some(&ch) = c.chars.get(c.pos) {
                match ch {
                    '0' => bits.push(0),
                    '1' => bits.push(1),
                    _ => return c.fail(c.pos, format!("expected '0' or '1', found {ch:?}")),
                }
                c.pos += 1;
            }
            if bits.is_empty() {
                return c.fail(start, "expected at least one bit");
            }
            StateSpec::Basis { bits }
        } else if c.eat("random:") {
            let n = c.size()?;
            c.expect(':')?;
            StateSpec::Random { n, seed: c.integer()? }
        } else if c.eat("file:") {
            let at = c.pos;
            let path = c.rest();
            if path.is_empty() {
                return c.fail(at, "expected a file path");
            }
            StateSpec::File { path: path.into() }
        } else {
            return c.fail(
                0,
                "unknown state family; expected singlet*<k>, singlet*<k>+0, cat:<n>, \
                 basis:<bits>, random:<n>:<seed> or file:<path>",
            );
        };
        c.finish()?;
        Ok(spec)
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Singlets { k } => write!(f, "singlet*{k}"),
            StateSpec::SingletsPlusZero { k } => write!(f, "singlet*{k}+0"),
            StateSpec::Cat { n } => write!(f, "cat:{n}"),
            StateSpec::Basis { bits } => {
                write!(f, "basis:")?;
                bits.iter().try_for_each(|b| write!(f, "{b}"))
            }
            StateSpec::Random { n, seed } => write!(f, "random:{n}:{seed}"),
            StateSpec::File { path } => write!(f, "file:{}", path.display()),
        }
    }
}

fn capacity(n: usize) -> Result<(), crate::CliError> {
    if n > MAX_CLI_QUBITS {
        return Err(crate::CliError::Input(format!(
            "capacity exceeded: n = {n} qubits, the command line supports at most {MAX_CLI_QUBITS}"
        )));
    }
    Ok(())
}

impl StateSpec {
    /// Qubit count, when known without reading a file.
    pub fn qubits(&self) -> Option<usize> {
        match self {
            StateSpec::Singlets { k } => k.checked_mul(2),
            StateSpec::SingletsPlusZero { k } => k.checked_mul(2).and_then(|n| n.checked_add(1)),
            StateSpec::Cat { n } | StateSpec::Random { n, .. } => Some(*n),
            StateSpec::Basis { bits } => Some(bits.len()),
            StateSpec::File { .. } => None,
        }
    }

    /// Builds the state, refusing anything above [`MAX_CLI_QUBITS`].
    pub fn build(&self) -> Result<PureState, crate::CliError> {
        if let Some(n) = self.qubits() {
            capacity(n)?;
        } else if !matches!(self, StateSpec::File { .. }) {
            capacity(usize::MAX)?;
        }
        let psi = match self {
            StateSpec::Singlets { k } => make_singlet_product(*k)?,
            StateSpec::SingletsPlusZero { k } => make_singlet_product_plus_zero(*k)?,
            StateSpec::Cat { n } => make_cat(*n)?,
            StateSpec::Basis { bits } => make_basis(MultiIndex::from_bits(bits)?),
            StateSpec::Random { n, seed } => sample_haar_state(*n, *seed)?,
            StateSpec::File { path } => PureState::load(path)?,
        };
        capacity(psi.n())?;
        Ok(psi)
    }
}
