//! Elliptic curves `y^2 = f(x)` with `f` a monic cubic: three roots.

use alloc::format;
use alloc::string::ToString;
use core::fmt;
use core::str::FromStr;

use num_traits::{ToPrimitive, Zero};

use crate::cluster::ClusterPicture;
use crate::inertia::find_action_for_prime;
use crate::numbers::{int, is_prime, legendre_i64, rat, Rational};
use crate::repn::{assemble_h1, InertiaRep, RhoSum};
use crate::rootnum::{m_t, root_number, RootNumberResult};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KodairaType {
    I0,
    II,
    III,
    IV,
    I0Star,
    IVStar,
    IIIStar,
    IIStar,
    In(u64),
    InStar(u64),
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::I0 => f.write_str("I0"),
            KodairaType::II => f.write_str("II"),
            KodairaType::III => f.write_str("III"),
            KodairaType::IV => f.write_str("IV"),
            KodairaType::I0Star => f.write_str("I0*"),
            KodairaType::IVStar => f.write_str("IV*"),
            KodairaType::IIIStar => f.write_str("III*"),
            KodairaType::IIStar => f.write_str("II*"),
            KodairaType::In(n) => write!(f, "I{n}"),
            KodairaType::InStar(n) => write!(f, "I{n}*"),
        }
    }
}

impl FromStr for KodairaType {
    type Err = Error;

    fn from_str(s: &str) -> Result<KodairaType> {
        let fixed = [
            KodairaType::I0,
            KodairaType::II,
            KodairaType::III,
            KodairaType::IV,
            KodairaType::I0Star,
            KodairaType::IVStar,
            KodairaType::IIIStar,
            KodairaType::IIStar,
        ];
        if let Some(k) = fixed.iter().find(|k| k.to_string() == s) {
            return Ok(*k);
        }
        let bad = || Error::Invalid(format!("unknown Kodaira type {s:?}"));
        let body = s.strip_prefix('I').ok_or_else(bad)?;
        let (digits, star) = match body.strip_suffix('*') {
            Some(d) => (d, true),
            None => (body, false),
        };
        let n: u64 = digits.parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(bad());
        }
        Ok(if star { KodairaType::InStar(n) } else { KodairaType::In(n) })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reduction {
    PotentiallyGood,
    PotentiallyMultiplicative,
}

pub fn potential_reduction(pic: &ClusterPicture) -> Result<Reduction> {
    if pic.leaf_count() != 3 {
        return Err(Error::Invalid(format!("an elliptic curve has three roots, not {}", pic.leaf_count())));
    }
    Ok(if pic.topology().proper().len() == 1 {
        Reduction::PotentiallyGood
    } else {
        Reduction::PotentiallyMultiplicative
    })
}

/// The root number column of the potentially good table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableSign {
    One,
    /// `(a / q)` for the given `a`.
    Legendre(i64),
}

impl TableSign {
    pub fn eval(self, q: u64) -> Result<i8> {
        match self {
            TableSign::One => Ok(1),
            TableSign::Legendre(a) => legendre_i64(a, q),
        }
    }
}

impl fmt::Display for TableSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableSign::One => f.write_str("1"),
            TableSign::Legendre(a) => write!(f, "({a}/q)"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GoodRow {
    /// `d_R mod 2` as `(num, den)`.
    pub depth: (i64, i64),
    pub kodaira: KodairaType,
    pub h1: &'static str,
    pub sign: TableSign,
}

impl GoodRow {
    pub fn depth(&self) -> Rational {
        rat(self.depth.0, self.depth.1)
    }
}

pub const GOOD_TABLE: [GoodRow; 8] = [
    GoodRow { depth: (0, 1), kodaira: KodairaType::I0, h1: "2rho1", sign: TableSign::One },
    GoodRow { depth: (1, 3), kodaira: KodairaType::II, h1: "rho6", sign: TableSign::Legendre(-1) },
    GoodRow { depth: (1, 2), kodaira: KodairaType::III, h1: "rho4", sign: TableSign::Legendre(-2) },
    GoodRow { depth: (2, 3), kodaira: KodairaType::IV, h1: "rho3", sign: TableSign::Legendre(-3) },
    GoodRow { depth: (1, 1), kodaira: KodairaType::I0Star, h1: "2rho2", sign: TableSign::Legendre(-1) },
    GoodRow { depth: (4, 3), kodaira: KodairaType::IVStar, h1: "rho3", sign: TableSign::Legendre(-3) },
    GoodRow { depth: (3, 2), kodaira: KodairaType::IIIStar, h1: "rho4", sign: TableSign::Legendre(-2) },
    GoodRow { depth: (5, 3), kodaira: KodairaType::IIStar, h1: "rho6", sign: TableSign::Legendre(-1) },
];

/// `x mod 2` in `[0, 2)`.
pub fn mod_two(x: &Rational) -> Rational {
    let two = int(2);
    x - (x / &two).floor() * two
}

#[derive(Clone, Debug)]
pub struct EllipticClassification {
    pub reduction: Reduction,
    /// Multiplicative reduction over the base field.
    pub multiplicative: bool,
    /// `d_R` after the change of model, in `[0, 2)`.
    pub normalized_depth: Rational,
    pub kodaira: KodairaType,
    pub rep: InertiaRep,
    pub root_number: RootNumberResult,
    /// The matching row of the potentially good table.
    pub row: Option<GoodRow>,
}

pub fn classify(pic: &ClusterPicture, q: u64) -> Result<EllipticClassification> {
    let reduction = potential_reduction(pic)?;
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if q == 2 {
        return Err(Error::NotOddPrime(q));
    }
    let topo = pic.topology();
    let root = topo.root();
    let d_r = pic.d(root).clone();
    let normalized = mod_two(&d_r);
    match reduction {
        Reduction::PotentiallyGood => {
            if q < 5 {
                return Err(Error::PrimeTooSmall(format!(
                    "potentially good reduction is classified for q >= 5, got q = {q}"
                )));
            }
            let (action, _) = find_action_for_prime(pic, q)?;
            let row = *GOOD_TABLE
                .iter()
                .find(|r| r.depth() == normalized)
                .ok_or_else(|| Error::Integrity(format!("no table row for d_R = {normalized} mod 2")))?;
            let rep = assemble_h1(pic, &action, Some(q))?;
            let expected: RhoSum = row.h1.parse()?;
            if rep.h1_ab != expected || !rep.h1_t.is_zero() {
                return Err(Error::Integrity(format!(
                    "H^1 = {} + {} (x) sp(2) differs from the table value {expected}",
                    rep.h1_ab, rep.h1_t
                )));
            }
            let rn = root_number(&rep, q, m_t(pic, &action))?;
            if rn.sign != row.sign.eval(q)? {
                return Err(Error::Integrity(format!("root number {} differs from the table value {}", rn.sign, row.sign)));
            }
            Ok(EllipticClassification {
                reduction,
                multiplicative: false,
                normalized_depth: normalized,
                kodaira: row.kodaira,
                rep,
                root_number: rn,
                row: Some(row),
            })
        }
        Reduction::PotentiallyMultiplicative => {
            if !d_r.is_integer() {
                return Err(Error::Invalid(format!(
                    "the top cluster of a two-cluster cubic has integral depth, got {d_r}"
                )));
            }
            let s1 = topo.proper().into_iter().find(|&s| s != root).expect("two proper clusters");
            let delta = pic.relative_depth(s1);
            let n = (delta.clone() * int(2))
                .to_integer()
                .to_u64()
                .filter(|&n| n > 0 && (delta.clone() * int(2)).is_integer())
                .ok_or_else(|| Error::Invalid(format!("relative depth {delta} is not a positive half-integer")))?;
            let (action, _) = find_action_for_prime(pic, q)?;
            let rep = assemble_h1(pic, &action, Some(q))?;
            let rn = root_number(&rep, q, m_t(pic, &action))?;
            let multiplicative = normalized.is_zero();
            Ok(EllipticClassification {
                reduction,
                multiplicative,
                normalized_depth: normalized,
                kodaira: if multiplicative { KodairaType::In(n) } else { KodairaType::InStar(n) },
                rep,
                root_number: rn,
                row: None,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(d: &str) -> ClusterPicture {
        ClusterPicture::parse(&format!("(r r r){d}")).unwrap()
    }

    #[test]
    fn reduction_kind() {
        assert_eq!(potential_reduction(&single("1/2")).unwrap(), Reduction::PotentiallyGood);
        assert_eq!(potential_reduction(&single("0")).unwrap(), Reduction::PotentiallyGood);
        let m = ClusterPicture::parse("((r r)1 r)0").unwrap();
        assert_eq!(potential_reduction(&m).unwrap(), Reduction::PotentiallyMultiplicative);
        let four = ClusterPicture::parse("(r r r r)1").unwrap();
        assert!(matches!(potential_reduction(&four), Err(Error::Invalid(_))));
    }

    #[test]
    fn good_rows() {
        for row in GOOD_TABLE {
            for shift in [-2i64, 0, 2, 4] {
                let d = row.depth() + int(shift);
                let c = classify(&single(&d.to_string()), 7).unwrap();
                assert_eq!(c.kodaira, row.kodaira);
                assert_eq!(c.rep.h1_ab, row.h1.parse().unwrap());
                assert!(!c.root_number.ambiguous);
            }
        }
        let c = classify(&single("1/3"), 11).unwrap();
        assert_eq!((c.kodaira, c.root_number.sign), (KodairaType::II, -1));
        let c = classify(&single("5/3"), 13).unwrap();
        assert_eq!((c.kodaira, c.root_number.sign), (KodairaType::IIStar, 1));
        assert!(matches!(classify(&single("1/2"), 3), Err(Error::PrimeTooSmall(_))));
    }

    #[test]
    fn multiplicative_rows() {
        let c = classify(&ClusterPicture::parse("((r r)3 r)0").unwrap(), 5).unwrap();
        assert_eq!(c.kodaira, KodairaType::In(6));
        assert!(c.multiplicative);
        assert_eq!(c.rep.h1_t, RhoSum::rho(1));
        assert!(c.root_number.ambiguous);
        let c = classify(&ClusterPicture::parse("((r r)5/2 r)1").unwrap(), 3).unwrap();
        assert_eq!(c.kodaira, KodairaType::InStar(3));
        assert!(!c.multiplicative);
        assert_eq!((c.root_number.sign, c.root_number.ambiguous), (-1, false));
        let c = classify(&ClusterPicture::parse("((r r)1/2 r)-2").unwrap(), 7).unwrap();
        assert_eq!(c.kodaira, KodairaType::In(5));
        let bad = ClusterPicture::parse("((r r)1 r)1/2").unwrap();
        assert!(matches!(classify(&bad, 5), Err(Error::Invalid(_))));
    }

    #[test]
    fn kodaira_names() {
        for s in ["I0", "II", "III", "IV", "I0*", "IV*", "III*", "II*", "I7", "I2*"] {
            assert_eq!(s.parse::<KodairaType>().unwrap().to_string(), s);
        }
        assert!("I0x".parse::<KodairaType>().is_err());
    }
}
