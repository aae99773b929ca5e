use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};

/// Number of factors of a Pochhammer symbol.
#[derive(Clone, Debug, PartialEq)]
pub enum Count {
    Finite(Box<Expr>),
    Infinite,
}

/// Multi-sums available by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedSum {
    Capparelli,
    Tsf,
    Tsc,
    Tse,
    Ntss,
}

impl NamedSum {
    pub const ALL: [NamedSum; 5] = [NamedSum::Capparelli, NamedSum::Tsf, NamedSum::Tsc, NamedSum::Tse, NamedSum::Ntss];

    pub fn name(self) -> &'static str {
        match self {
            NamedSum::Capparelli => "capparelli",
            NamedSum::Tsf => "tsf",
            NamedSum::Tsc => "tsc",
            NamedSum::Tse => "tse",
            NamedSum::Ntss => "ntss",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        NamedSum::ALL.into_iter().find(|n| n.name() == s)
    }
}

/// Expression tree. Rational literals are nonnegative; signs are `Neg` nodes.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Rational(BigRational),
    /// ω^k, k ∈ {1, 2}.
    Omega(u8),
    /// q raised to a literal rational.
    QPower(Rational64),
    /// `z`, `t` or a summation index.
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Power with an exponent that folds to a rational number.
    Pow(Box<Expr>, Box<Expr>),
    Poch { args: Vec<Expr>, base: Box<Expr>, count: Count },
    Phi { uppers: Vec<Expr>, lowers: Vec<Expr>, base: Box<Expr>, arg: Box<Expr> },
    /// The triple sum F(u, v, w).
    KrF(Box<Expr>, Box<Expr>, Box<Expr>),
    MultiSum(NamedSum),
    Jtp(Box<Expr>),
    /// Constant term in z of a product of infinite z-Pochhammer symbols.
    Ct(Box<Expr>),
    RogersC { n: Box<Expr>, a: Box<Expr>, base: Box<Expr>, z: Box<Expr> },
    AwPoly { n: Box<Expr>, params: Box<[Expr; 4]>, base: Box<Expr>, z: Box<Expr> },
    /// Finite sum over an integer index.
    Sum { var: String, lo: Box<Expr>, hi: Box<Expr>, body: Box<Expr> },
}

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn q() -> Expr {
        Expr::QPower(Rational64::from_integer(1))
    }

    pub fn b(self) -> Box<Expr> {
        Box::new(self)
    }

    /// Direct subexpressions, left to right.
    pub fn children_mut(&mut self) -> Vec<&mut Expr> {
        match self {
            Expr::Rational(_) | Expr::Omega(_) | Expr::QPower(_) | Expr::Var(_) | Expr::MultiSum(_) => vec![],
            Expr::Neg(x) | Expr::Jtp(x) | Expr::Ct(x) => vec![x.as_mut()],
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => vec![a.as_mut(), b.as_mut()],
            Expr::Poch { args, base, count } => {
                let mut v: Vec<&mut Expr> = args.iter_mut().collect();
                v.push(base.as_mut());
                if let Count::Finite(n) = count {
                    v.push(n.as_mut());
                }
                v
            }
            Expr::Phi { uppers, lowers, base, arg } => {
                let mut v: Vec<&mut Expr> = uppers.iter_mut().chain(lowers.iter_mut()).collect();
                v.extend([base.as_mut(), arg.as_mut()]);
                v
            }
            Expr::KrF(u, v, w) => vec![u.as_mut(), v.as_mut(), w.as_mut()],
            Expr::RogersC { n, a, base, z } => vec![n.as_mut(), a.as_mut(), base.as_mut(), z.as_mut()],
            Expr::AwPoly { n, params, base, z } => {
                let mut v = vec![n.as_mut()];
                v.extend(params.iter_mut());
                v.extend([base.as_mut(), z.as_mut()]);
                v
            }
            Expr::Sum { lo, hi, body, .. } => vec![lo.as_mut(), hi.as_mut(), body.as_mut()],
        }
    }
}
