use super::{BilinearForm, ExpVec, QTElem};
use crate::error::{Error, Result};

fn coord_bounds(z: &QTElem) -> (Vec<i64>, Vec<i64>) {
    let n = z.dim();
    let mut lo = vec![i64::MAX; n];
    let mut hi = vec![i64::MIN; n];
    for m in z.support() {
        for j in 0..n {
            lo[j] = lo[j].min(m[j]);
            hi[j] = hi[j].max(m[j]);
        }
    }
    (lo, hi)
}

/// Right division in the quantum torus: returns `q` with `q * divisor = numerator`.
///
/// Cancels the lex-leading term of the remainder against the lex-leading term of the
/// divisor. Newton polytopes add under multiplication (the coefficient ring is a
/// domain), so every quotient exponent is confined to a box computed up front; a step
/// that leaves it, or a coefficient that does not divide, means no Laurent quotient.
pub fn exact_divide(numerator: &QTElem, divisor: &QTElem, form: &BilinearForm) -> Result<QTElem> {
    if numerator.dim() != divisor.dim() {
        return Err(Error::DimensionMismatch { left: numerator.dim(), right: divisor.dim() });
    }
    let (md, cd) = match divisor.lead() {
        Some((m, c)) => (m.clone(), c.clone()),
        None => return Err(Error::NotDivisible("division by zero".into())),
    };
    let n = numerator.dim();
    let mut q = QTElem::zero(n);
    if numerator.is_zero() {
        return Ok(q);
    }
    let (nlo, nhi) = coord_bounds(numerator);
    let (dlo, dhi) = coord_bounds(divisor);
    let lo: Vec<i64> = (0..n).map(|j| nlo[j] - dlo[j]).collect();
    let hi: Vec<i64> = (0..n).map(|j| nhi[j] - dhi[j]).collect();

    let mut rem = numerator.clone();
    while let Some((mr, cr)) = rem.lead().map(|(m, c)| (m.clone(), c.clone())) {
        let mq: ExpVec = &mr - &md;
        if (0..n).any(|j| mq[j] < lo[j] || mq[j] > hi[j]) {
            return Err(Error::NotDivisible(format!("remainder term ({cr})*X{mr} cannot be cancelled")));
        }
        let twist = form.eval(&mq, &md);
        let cq = cr
            .exact_div(&cd.shift(twist))
            .ok_or_else(|| Error::NotDivisible(format!("coefficient {cr} not divisible by {cd}")))?;
        let step = QTElem::term(mq.clone(), cq.clone()).twisted_mul(divisor, form);
        rem = &rem - &step;
        q.add_term(mq, cq);
    }
    Ok(q)
}

/// Left division: returns `q` with `divisor * q = numerator`.
pub fn exact_divide_left(numerator: &QTElem, divisor: &QTElem, form: &BilinearForm) -> Result<QTElem> {
    // d * q = N  <=>  bar(q) * bar(d) = bar(N)
    exact_divide(&numerator.bar(), &divisor.bar(), form).map(|q| q.bar())
}
