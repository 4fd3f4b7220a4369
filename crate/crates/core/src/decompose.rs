//! Classical decompositions: traceless matrices as commutators and as sums of
//! square-zero matrices.

use crate::error::{Error, Result};
use crate::exactmat::{nilpotent_jordan_basis, zero_diagonal_conjugator, Mat};

/// `parts` sum to `target` and each squares to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareZeroSum {
    pub parts: Vec<Mat>,
    pub target: Mat,
}

impl SquareZeroSum {
    pub fn check(&self) -> bool {
        let mut sum = Mat::zeros(self.target.field(), self.target.n());
        for p in &self.parts {
            if p.check_compatible(&self.target).is_err() || !(p * p).is_zero() {
                return false;
            }
            sum = &sum + p;
        }
        sum == self.target
    }
}

/// `[x, y] = target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutatorForm {
    pub x: Mat,
    pub y: Mat,
    pub target: Mat,
}

impl CommutatorForm {
    pub fn check(&self) -> bool {
        self.x.check_compatible(&self.target).is_ok()
            && self.y.check_compatible(&self.target).is_ok()
            && self.x.commutator(&self.y) == self.target
    }
}

fn require_traceless(a: &Mat) -> Result<()> {
    if a.trace().is_zero() {
        Ok(())
    } else {
        Err(Error::pre(format!("trace is {}, not 0", a.trace())))
    }
}

/// Writes a traceless matrix as a single commutator.
pub fn commutator_realization(a: &Mat) -> Result<CommutatorForm> {
    require_traceless(a)?;
    let n = a.n();
    let field = a.field();
    if let Some(k) = (1..n as u64).find(|&k| !field.admits_division_by(k)) {
        return Err(Error::FieldTooSmall(format!(
            "{field} cannot divide by {k}, needed for {n}x{n} commutators"
        )));
    }
    if a.is_zero() {
        return Ok(CommutatorForm {
            x: a.clone(),
            y: a.clone(),
            target: a.clone(),
        });
    }
    let c = zero_diagonal_conjugator(a)?;
    let d = c.pull_back(a);
    let x0 = Mat::diag(field, &(0..n).map(|i| field.int(i as i64)).collect::<Vec<_>>());
    let mut y0 = Mat::zeros(field, n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                y0.set(i, j, d.get(i, j).div(&field.int(i as i64 - j as i64)));
            }
        }
    }
    Ok(CommutatorForm {
        x: x0.conjugate(&c),
        y: y0.conjugate(&c),
        target: a.clone(),
    })
}

/// `a = [x, y] + (tr(a)/n)·I`. Over a field one commutator suffices, so the
/// list always has one entry; `k` only records the bound regime.
pub fn commutators_plus_central_split(a: &Mat, k: usize) -> Result<(Vec<CommutatorForm>, Mat)> {
    if k == 0 {
        return Err(Error::pre("commutator count must be positive"));
    }
    let n = a.n();
    let field = a.field();
    if !field.admits_division_by(n as u64) {
        return Err(Error::FieldTooSmall(format!("characteristic of {field} divides {n}")));
    }
    let central = Mat::scalar(n, a.trace().div(&field.int(n as i64)));
    let form = commutator_realization(&(a - &central))?;
    Ok((vec![form], central))
}

/// Splits a nilpotent matrix into exactly two square-zero parts by the parity
/// of the Jordan superdiagonal positions.
pub fn nilpotent_two_square_zero(u: &Mat) -> Result<SquareZeroSum> {
    let c = nilpotent_jordan_basis(u)?;
    let j = c.pull_back(u);
    let n = u.n();
    let field = u.field();
    let mut parts = [Mat::zeros(field, n), Mat::zeros(field, n)];
    for i in 0..n.saturating_sub(1) {
        if !j.get(i, i + 1).is_zero() {
            parts[i % 2].set(i, i + 1, j.get(i, i + 1).clone());
        }
    }
    Ok(SquareZeroSum {
        parts: parts.iter().map(|p| p.conjugate(&c)).collect(),
        target: u.clone(),
    })
}

/// At most four square-zero parts summing to a traceless matrix; zero parts are dropped.
pub fn traceless_four_square_zero(a: &Mat) -> Result<SquareZeroSum> {
    require_traceless(a)?;
    let n = a.n();
    let field = a.field();
    let c = zero_diagonal_conjugator(a)?;
    let d = c.pull_back(a);
    let mut lower = Mat::zeros(field, n);
    let mut upper = Mat::zeros(field, n);
    for i in 0..n {
        for j in 0..n {
            match i.cmp(&j) {
                std::cmp::Ordering::Greater => lower.set(i, j, d.get(i, j).clone()),
                std::cmp::Ordering::Less => upper.set(i, j, d.get(i, j).clone()),
                std::cmp::Ordering::Equal => {}
            }
        }
    }
    let mut parts = Vec::new();
    for half in [lower, upper] {
        for p in nilpotent_two_square_zero(&half)?.parts {
            if !p.is_zero() {
                parts.push(p.conjugate(&c));
            }
        }
    }
    Ok(SquareZeroSum {
        parts,
        target: a.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    const Q: Field = Field::Rational;

    #[test]
    fn commutator_examples() {
        let a = Mat::diag(Q, &[Q.int(1), Q.int(-1)]);
        assert!(commutator_realization(&a).unwrap().check());
        let z = commutator_realization(&Mat::zeros(Q, 3)).unwrap();
        assert!(z.x.is_zero() && z.y.is_zero());
        let a = Mat::from_i64(Q, &[&[1, 2, 0, -1], &[3, 0, 1, 1], &[0, 5, -4, 2], &[1, 1, 1, 3]]);
        assert!(commutator_realization(&a).unwrap().check());
        assert!(commutator_realization(&Mat::identity(Q, 2)).is_err());
    }

    #[test]
    fn commutator_needs_large_characteristic() {
        let f3 = Field::Prime(3);
        let a = Mat::unit(f3, 4, 0, 1);
        assert!(matches!(commutator_realization(&a), Err(Error::FieldTooSmall(_))));
        let f5 = Field::Prime(5);
        let a = Mat::from_i64(f5, &[&[1, 2, 0], &[0, 3, 1], &[4, 4, 1]]);
        assert!(commutator_realization(&a).unwrap().check());
    }

    #[test]
    fn central_split_examples() {
        let (forms, central) = commutators_plus_central_split(&Mat::identity(Q, 2), 1).unwrap();
        assert!(forms[0].target.is_zero());
        assert!(central.is_identity());

        let e11 = Mat::unit(Q, 2, 0, 0);
        let (forms, central) = commutators_plus_central_split(&e11, 1).unwrap();
        let half = Q.parse_scalar("1/2").unwrap();
        assert_eq!(central, Mat::scalar(2, half));
        assert!(forms[0].check());
        assert_eq!(&forms[0].target + &central, e11);

        let e12 = Mat::unit(Q, 2, 0, 1);
        assert!(commutators_plus_central_split(&e12, 2).unwrap().1.is_zero());
        assert!(commutators_plus_central_split(&Mat::identity(Field::Prime(2), 2), 1).is_err());
    }

    #[test]
    fn nilpotent_examples() {
        let e12 = Mat::unit(Q, 2, 0, 1);
        let s = nilpotent_two_square_zero(&e12).unwrap();
        assert_eq!(s.parts, vec![e12.clone(), Mat::zeros(Q, 2)]);

        let j3 = Mat::from_i64(Q, &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let s = nilpotent_two_square_zero(&j3).unwrap();
        assert_eq!(s.parts, vec![Mat::unit(Q, 3, 0, 1), Mat::unit(Q, 3, 1, 2)]);
        assert!(s.check());

        assert!(nilpotent_two_square_zero(&Mat::identity(Q, 2)).is_err());
    }

    #[test]
    fn four_square_zero_examples() {
        let e12 = Mat::unit(Q, 2, 0, 1);
        assert_eq!(traceless_four_square_zero(&e12).unwrap().parts, vec![e12]);

        let d = Mat::diag(Q, &[Q.int(1), Q.int(-1)]);
        let s = traceless_four_square_zero(&d).unwrap();
        assert_eq!(s.parts.len(), 2);
        assert!(s.check());

        let a = Mat::from_i64(
            Q,
            &[&[2, 1, 0, 3, 1], &[1, -1, 4, 0, 0], &[0, 2, 3, 1, -2], &[5, 0, 1, -4, 1], &[1, 1, 1, 1, 0]],
        );
        let s = traceless_four_square_zero(&a).unwrap();
        assert!(s.parts.len() <= 4);
        assert!(s.check());
        assert!(s.parts.iter().all(|p| p.rank() <= 2));
    }
}
