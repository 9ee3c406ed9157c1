use serde::{Deserialize, Serialize};

use super::bits::{check_width, mask, BitString};
use super::gf2::Gf2Matrix;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Representation {
    /// `f(x) = M x` over GF(2); realizable with CNOTs only.
    Linear(Gf2Matrix),
    /// Explicit truth table of length `2^n`.
    Table(Vec<u32>),
}

/// An `n`-bit to `n`-bit Boolean function.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    n: usize,
    repr: Representation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassKind {
    OneToOne,
    TwoToOne,
}

impl ClassKind {
    pub fn label(self) -> &'static str {
        match self {
            ClassKind::OneToOne => "1:1",
            ClassKind::TwoToOne => "2:1",
        }
    }

    /// Numeric label used by the learners: 0 for 1:1, 1 for 2:1.
    pub fn as_index(self) -> usize {
        match self {
            ClassKind::OneToOne => 0,
            ClassKind::TwoToOne => 1,
        }
    }
}

/// Ground-truth class of a Simon-type function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FunctionClass {
    pub kind: ClassKind,
    /// All zeros for 1:1 functions, the nonzero period for 2:1 functions.
    pub hidden: BitString,
}

impl FunctionClass {
    pub fn one_to_one(n: usize) -> Self {
        Self {
            kind: ClassKind::OneToOne,
            hidden: BitString::zero(n),
        }
    }

    pub fn two_to_one(hidden: BitString) -> Self {
        assert!(!hidden.is_zero(), "2:1 class needs a nonzero hidden string");
        Self {
            kind: ClassKind::TwoToOne,
            hidden,
        }
    }
}

impl BooleanFunction {
    pub fn linear(m: Gf2Matrix) -> Self {
        Self {
            n: m.n(),
            repr: Representation::Linear(m),
        }
    }

    pub fn from_table(n: usize, table: Vec<u32>) -> Result<Self> {
        check_width(n)?;
        if table.len() != 1 << n {
            return Err(Error::InvalidParameter(format!(
                "truth table for n = {n} needs {} entries, got {}",
                1usize << n,
                table.len()
            )));
        }
        if table.iter().any(|&y| y > mask(n)) {
            return Err(Error::InvalidParameter(format!(
                "truth table entry exceeds {n} bits"
            )));
        }
        Ok(Self {
            n,
            repr: Representation::Table(table),
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::linear(Gf2Matrix::identity(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn representation(&self) -> &Representation {
        &self.repr
    }

    pub fn matrix(&self) -> Option<&Gf2Matrix> {
        match &self.repr {
            Representation::Linear(m) => Some(m),
            Representation::Table(_) => None,
        }
    }

    /// Evaluates on a raw input index `x < 2^n`.
    #[inline]
    pub fn eval(&self, x: u32) -> u32 {
        match &self.repr {
            Representation::Linear(m) => m.apply_raw(x),
            Representation::Table(t) => t[x as usize],
        }
    }

    pub fn evaluate(&self, x: BitString) -> BitString {
        assert_eq!(x.width(), self.n, "width mismatch");
        BitString::from_raw(self.n, self.eval(x.value()))
    }

    pub fn truth_table(&self) -> Vec<u32> {
        match &self.repr {
            Representation::Table(t) => t.clone(),
            Representation::Linear(m) => (0..1u32 << self.n).map(|x| m.apply_raw(x)).collect(),
        }
    }

    /// Composes an output relabeling after `self`, returning a table function.
    pub fn map_outputs(&self, relabel: impl Fn(u32) -> u32) -> Result<Self> {
        let table = (0..1u32 << self.n).map(|x| relabel(self.eval(x))).collect();
        Self::from_table(self.n, table)
    }

    /// Brute-force ground truth over all `2^n` inputs.
    pub fn classify_exact(&self) -> Result<FunctionClass> {
        let size = 1usize << self.n;
        // first preimage seen for each output, and preimage counts
        let mut first = vec![u32::MAX; size];
        let mut counts = vec![0u32; size];
        let mut hidden: Option<u32> = None;
        for x in 0..size as u32 {
            let y = self.eval(x) as usize;
            counts[y] += 1;
            match counts[y] {
                1 => first[y] = x,
                2 => {
                    let s = first[y] ^ x;
                    match hidden {
                        None => hidden = Some(s),
                        Some(h) if h != s => {
                            return Err(Error::UnsupportedClass(format!(
                                "collision pairs have different differences {h:#x} and {s:#x}"
                            )))
                        }
                        Some(_) => {}
                    }
                }
                c => {
                    return Err(Error::UnsupportedClass(format!(
                        "output {y:#x} has at least {c} preimages"
                    )))
                }
            }
        }
        match hidden {
            None => Ok(FunctionClass::one_to_one(self.n)),
            Some(s) => {
                if counts.contains(&1) {
                    return Err(Error::UnsupportedClass(
                        "mixes singly and doubly covered outputs".into(),
                    ));
                }
                Ok(FunctionClass::two_to_one(BitString::from_raw(self.n, s)))
            }
        }
    }
}

pub fn evaluate(f: &BooleanFunction, x: BitString) -> BitString {
    f.evaluate(x)
}

pub fn classify_exact(f: &BooleanFunction) -> Result<FunctionClass> {
    f.classify_exact()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows1010() -> BooleanFunction {
        BooleanFunction::linear(Gf2Matrix::parse_rows(&["10", "10"]).unwrap())
    }

    #[test]
    fn evaluate_examples() {
        let x = BitString::parse("110").unwrap();
        assert_eq!(BooleanFunction::identity(3).evaluate(x), x);

        let table = BooleanFunction::from_table(2, vec![0b00, 0b00, 0b11, 0b11]).unwrap();
        assert_eq!(
            table.evaluate(BitString::parse("01").unwrap()).to_string(),
            "00"
        );
        assert_eq!(table.truth_table(), rows1010().truth_table());
    }

    #[test]
    fn classify_examples() {
        let c = BooleanFunction::identity(6).classify_exact().unwrap();
        assert_eq!(c.kind, ClassKind::OneToOne);
        assert_eq!(c.hidden.to_string(), "000000");

        let c = rows1010().classify_exact().unwrap();
        assert_eq!(c.kind, ClassKind::TwoToOne);
        assert_eq!(c.hidden.to_string(), "01");
    }

    #[test]
    fn four_to_one_is_unsupported() {
        // rank n-2 = 1 at n = 3: every output has four preimages
        let m = Gf2Matrix::parse_rows(&["001", "001", "000"]).unwrap();
        assert_eq!(m.rank(), 1);
        let err = BooleanFunction::linear(m).classify_exact().unwrap_err();
        assert!(matches!(err, Error::UnsupportedClass(_)));
    }

    #[test]
    fn two_to_one_without_common_period_is_unsupported() {
        // collision pairs {0,1} and {2,4} have differences 1 and 6
        let t = vec![0, 0, 1, 2, 1, 3, 2, 3];
        let f = BooleanFunction::from_table(3, t).unwrap();
        assert!(matches!(f.classify_exact(), Err(Error::UnsupportedClass(_))));
    }

    #[test]
    fn table_validation() {
        assert!(BooleanFunction::from_table(2, vec![0, 1, 2]).is_err());
        assert!(BooleanFunction::from_table(2, vec![0, 1, 2, 4]).is_err());
    }
}
