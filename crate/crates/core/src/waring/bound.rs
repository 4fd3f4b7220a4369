use std::fmt;

/// Which counting statement a bound refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `M_n(C)` with `C` commutative, where traceless elements are sums of `k` commutators.
    Commutative,
    /// Operators on a Hilbert space: twice the commutative bound.
    Hilbert,
    /// Matrices over a field, with square-zero decompositions of length 4.
    Field,
    /// Traceless targets over a field, as differences of image elements.
    SquareZero,
    /// Arbitrary targets over a field, as linear combinations of image elements.
    LinearCombination,
}

impl Regime {
    pub const ALL: [Regime; 5] = [
        Regime::Commutative,
        Regime::Hilbert,
        Regime::Field,
        Regime::SquareZero,
        Regime::LinearCombination,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Regime::Commutative => "commutative",
            Regime::Hilbert => "hilbert",
            Regime::Field => "field",
            Regime::SquareZero => "square-zero",
            Regime::LinearCombination => "nine",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Regime> {
        Regime::ALL.into_iter().find(|r| r.tag() == tag)
    }

    pub fn hypothesis(self) -> &'static str {
        match self {
            Regime::Commutative => {
                "A = M_n(C), C commutative, traceless elements are sums of k commutators; f not an identity or central polynomial"
            }
            Regime::Hilbert => "A = B(H); every element of f(A) - f(A) sums counted twice",
            Regime::Field => "A = M_n(F), F a field of characteristic 0; commutators via four square-zero parts",
            Regime::SquareZero => "traceless x in M_n(F): sum of 4 elements of f(A) - f(A)",
            Regime::LinearCombination => "x in M_n(F), f not cyclically equivalent to an identity: 9 elements of f(A)",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub k: u64,
    /// `1936 k^2 + 22 k`.
    pub formula: u128,
    pub regime: Regime,
    pub constant: u128,
    pub hypothesis: &'static str,
}

/// Number of image elements (differences for all but the linear regime) that
/// the decomposition in `regime` needs.
pub fn bound_formula(k: u64, regime: Regime) -> BoundReport {
    assert!(k >= 1, "k must be positive");
    let ck = 22 * k as u128;
    let formula = 4 * ck * ck + ck;
    let constant = match regime {
        Regime::Commutative => formula,
        Regime::Hilbert => 2 * formula,
        Regime::Field => 2 * 16 + 2 * 16 + 4,
        Regime::SquareZero => 4,
        Regime::LinearCombination => 9,
    };
    BoundReport {
        k,
        formula,
        regime,
        constant,
        hypothesis: regime.hypothesis(),
    }
}
