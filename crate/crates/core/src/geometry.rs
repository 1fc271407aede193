//! Vectors in F_q^d, the diagonal quadratic form, unit spheres and the set Ω
//! of square-type non-isotropic lines.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::ffield::{FieldElement, FieldSpec};

/// A vector in F_q^d. Ordering is lexicographic in coordinate order, each
/// coordinate compared by enumeration position.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointVec(Vec<FieldElement>);

impl PointVec {
    pub fn new(coords: Vec<FieldElement>) -> Self {
        PointVec(coords)
    }

    /// Builds a point from per-coordinate coefficient lists.
    pub fn from_coeffs(field: &FieldSpec, coords: &[Vec<u32>]) -> Result<Self> {
        coords
            .iter()
            .map(|c| field.element(c))
            .collect::<Result<Vec<_>>>()
            .map(PointVec)
    }

    /// Builds a point over the prime subfield from integers.
    pub fn from_ints(field: &FieldSpec, coords: &[i64]) -> Self {
        PointVec(coords.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn to_coeffs(&self, field: &FieldSpec) -> Vec<Vec<u32>> {
        self.0.iter().map(|&c| field.coeffs(c)).collect()
    }

    pub fn neg(&self, field: &FieldSpec) -> PointVec {
        PointVec(self.0.iter().map(|&c| field.neg(c)).collect())
    }

    pub fn scale(&self, field: &FieldSpec, s: FieldElement) -> PointVec {
        PointVec(self.0.iter().map(|&c| field.mul(c, s)).collect())
    }

    pub fn add(&self, field: &FieldSpec, other: &PointVec) -> Result<PointVec> {
        check_dims(self, other)?;
        Ok(PointVec(
            self.0.iter().zip(&other.0).map(|(&a, &b)| field.add(a, b)).collect(),
        ))
    }

    pub fn sub(&self, field: &FieldSpec, other: &PointVec) -> Result<PointVec> {
        check_dims(self, other)?;
        Ok(PointVec(
            self.0.iter().zip(&other.0).map(|(&a, &b)| field.sub(a, b)).collect(),
        ))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }
}

fn check_dims(x: &PointVec, y: &PointVec) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    Ok(())
}

/// Q(x) = x_1^2 + .. + x_d^2.
pub fn quad_form(field: &FieldSpec, x: &PointVec) -> FieldElement {
    x.0.iter()
        .fold(FieldElement::ZERO, |acc, &c| field.add(acc, field.mul(c, c)))
}

pub fn dot(field: &FieldSpec, x: &PointVec, y: &PointVec) -> Result<FieldElement> {
    check_dims(x, y)?;
    Ok(dot_unchecked(field, x, y))
}

#[inline]
pub(crate) fn dot_unchecked(field: &FieldSpec, x: &PointVec, y: &PointVec) -> FieldElement {
    x.0.iter()
        .zip(&y.0)
        .fold(FieldElement::ZERO, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
}

/// The finite-field "distance" Q(x - y).
pub fn dist(field: &FieldSpec, x: &PointVec, y: &PointVec) -> Result<FieldElement> {
    Ok(quad_form(field, &x.sub(field, y)?))
}

/// The unit sphere {x : Q(x) = 1} in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sphere {
    pub q: u32,
    pub d: usize,
    pub points: Vec<PointVec>,
}

impl Sphere {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, x: &PointVec) -> bool {
        self.points.binary_search(x).is_ok()
    }
}

/// Enumerates the unit sphere in F_q^d.
///
/// Walks the first d - 1 coordinates in lexicographic order and solves for
/// the last one with a table of square roots, so each prefix costs one
/// lookup instead of q trials.
pub fn sphere_enumerate(field: &FieldSpec, d: usize) -> Result<Sphere> {
    if d < 2 {
        return Err(Error::DimensionTooSmall { got: d, min: 2 });
    }
    let q = field.q() as usize;
    // roots[s] lists every t with t^2 = s, ascending
    let mut roots: Vec<Vec<FieldElement>> = vec![Vec::new(); q];
    for t in field.enumerate() {
        roots[field.mul(t, t).index() as usize].push(t);
    }

    let mut points = Vec::new();
    let mut prefix = vec![0u32; d - 1];
    loop {
        let coords: Vec<FieldElement> = prefix.iter().map(|&i| field.from_index(i).unwrap()).collect();
        let partial = quad_form(field, &PointVec(coords.clone()));
        let need = field.sub(FieldElement::ONE, partial);
        for &t in &roots[need.index() as usize] {
            let mut full = coords.clone();
            full.push(t);
            points.push(PointVec(full));
        }
        // odometer, last prefix coordinate fastest
        let mut k = d - 1;
        loop {
            if k == 0 {
                return Ok(Sphere {
                    q: field.q(),
                    d,
                    points,
                });
            }
            k -= 1;
            prefix[k] += 1;
            if (prefix[k] as usize) < q {
                break;
            }
            prefix[k] = 0;
        }
    }
}

/// A square-type line [U], stored by its canonical unit representative.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LineRep(PointVec);

impl LineRep {
    pub fn rep(&self) -> &PointVec {
        &self.0
    }
}

/// Of U and -U, the one whose first nonzero coordinate comes first in
/// enumeration order. Since both agree on the zero prefix this is the
/// lexicographic minimum.
pub fn canonical_sign(field: &FieldSpec, u: &PointVec) -> PointVec {
    let n = u.neg(field);
    if n < *u {
        n
    } else {
        u.clone()
    }
}

/// The line through x, normalised to a unit representative with the
/// canonical sign.
pub fn line_of(field: &FieldSpec, x: &PointVec) -> Result<LineRep> {
    let qx = quad_form(field, x);
    if qx.is_zero() {
        return Err(Error::Isotropic);
    }
    let t = field.sqrt(field.inv(qx)?).ok_or(Error::NonSquareType)?;
    Ok(LineRep(canonical_sign(field, &x.scale(field, t))))
}

/// The vertex set Ω: all square-type non-isotropic lines, sorted by
/// canonical representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaSet {
    pub q: u32,
    pub d: usize,
    lines: Vec<LineRep>,
}

impl OmegaSet {
    pub fn lines(&self) -> &[LineRep] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&LineRep> {
        self.lines.get(index)
    }

    /// Position of a line in Ω.
    pub fn index_of(&self, line: &LineRep) -> Option<usize> {
        self.lines.binary_search(line).ok()
    }
}

pub fn omega_build(field: &FieldSpec, d: usize) -> Result<OmegaSet> {
    Ok(omega_from_sphere(field, &sphere_enumerate(field, d)?))
}

/// Ω from an already enumerated sphere: keeps the canonical member of each
/// antipodal pair.
pub fn omega_from_sphere(field: &FieldSpec, sphere: &Sphere) -> OmegaSet {
    let lines = sphere
        .points
        .iter()
        .filter(|x| canonical_sign(field, x) == **x)
        .map(|x| LineRep(x.clone()))
        .collect();
    OmegaSet {
        q: sphere.q,
        d: sphere.d,
        lines,
    }
}

/// Δ(E) = {Q(x - y) : x, y ∈ E}.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DistanceSet {
    pub values: BTreeSet<FieldElement>,
}

impl DistanceSet {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        self.values.contains(&a)
    }
}

pub fn distance_set(field: &FieldSpec, points: &[PointVec]) -> Result<DistanceSet> {
    let first = points.first().ok_or(Error::EmptyInput)?;
    if let Some(bad) = points.iter().find(|x| x.dim() != first.dim()) {
        return Err(Error::DimensionMismatch {
            left: first.dim(),
            right: bad.dim(),
        });
    }
    let q = field.q() as usize;
    let mut seen = vec![false; q];
    seen[0] = true;
    let mut found = 1;
    'outer: for (i, x) in points.iter().enumerate() {
        for y in &points[i + 1..] {
            let v = quad_form(field, &x.sub(field, y)?).index() as usize;
            if !seen[v] {
                seen[v] = true;
                found += 1;
                if found == q {
                    break 'outer;
                }
            }
        }
    }
    let values = seen
        .iter()
        .enumerate()
        .filter(|(_, &s)| s)
        .map(|(i, _)| field.from_index(i as u32).unwrap())
        .collect();
    Ok(DistanceSet { values })
}

/// Image of a sphere subset in Ω.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lift {
    /// Ω indices, ascending.
    pub lines: Vec<usize>,
    /// Number of points of E on each line of `lines` (1 or 2).
    pub multiplicity: Vec<u8>,
}

impl Lift {
    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }
}

/// E₁ = {[x] : x ∈ E}.
pub fn lift(field: &FieldSpec, points: &[PointVec], omega: &OmegaSet) -> Result<Lift> {
    let mut idx = Vec::with_capacity(points.len());
    let mut distinct: Vec<&PointVec> = points.iter().collect();
    distinct.sort();
    distinct.dedup();
    for x in distinct {
        if x.dim() != omega.d || quad_form(field, x) != FieldElement::ONE {
            return Err(Error::NotOnSphere);
        }
        let line = line_of(field, x)?;
        idx.push(omega.index_of(&line).ok_or(Error::NotOnSphere)?);
    }
    idx.sort_unstable();
    let mut lines: Vec<usize> = Vec::new();
    let mut multiplicity: Vec<u8> = Vec::new();
    for i in idx {
        if lines.last() == Some(&i) {
            *multiplicity.last_mut().unwrap() += 1;
        } else {
            lines.push(i);
            multiplicity.push(1);
        }
    }
    Ok(Lift { lines, multiplicity })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(f: &FieldSpec, c: &[i64]) -> PointVec {
        PointVec::from_ints(f, c)
    }

    #[test]
    fn quadratic_form_and_dot() {
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(quad_form(&f3, &pt(&f3, &[0, 0, 0])), FieldElement::ZERO);
        assert_eq!(quad_form(&f3, &pt(&f3, &[1, 1, 1])), FieldElement::ZERO);
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(
            dot(&f5, &pt(&f5, &[1, 2, 0]), &pt(&f5, &[3, 1, 4])).unwrap(),
            FieldElement::ZERO
        );
        assert!(matches!(
            dot(&f5, &pt(&f5, &[1, 2]), &pt(&f5, &[1, 2, 3])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn distances() {
        let f3 = FieldSpec::prime(3).unwrap();
        let x = pt(&f3, &[1, 0, 0]);
        assert_eq!(dist(&f3, &x, &x).unwrap(), FieldElement::ZERO);
        assert_eq!(dist(&f3, &x, &pt(&f3, &[0, 1, 0])).unwrap(), f3.from_int(2));
        assert_eq!(dist(&f3, &x, &pt(&f3, &[-1, 0, 0])).unwrap(), FieldElement::ONE);
    }

    #[test]
    fn small_sphere() {
        let f3 = FieldSpec::prime(3).unwrap();
        let s = sphere_enumerate(&f3, 3).unwrap();
        let expected: Vec<PointVec> = [[0, 0, 1], [0, 0, 2], [0, 1, 0], [0, 2, 0], [1, 0, 0], [2, 0, 0]]
            .iter()
            .map(|c| pt(&f3, c))
            .collect();
        assert_eq!(s.points, expected);
        assert_eq!(
            sphere_enumerate(&f3, 1).unwrap_err(),
            Error::DimensionTooSmall { got: 1, min: 2 }
        );
    }

    #[test]
    fn distance_set_examples() {
        let f3 = FieldSpec::prime(3).unwrap();
        let one = distance_set(&f3, &[pt(&f3, &[1, 0, 0])]).unwrap();
        assert_eq!(one.values.into_iter().collect::<Vec<_>>(), vec![FieldElement::ZERO]);
        let two = distance_set(&f3, &[pt(&f3, &[1, 0, 0]), pt(&f3, &[0, 1, 0])]).unwrap();
        assert_eq!(
            two.values.into_iter().collect::<Vec<_>>(),
            vec![f3.from_int(0), f3.from_int(2)]
        );
        let all = distance_set(&f3, &sphere_enumerate(&f3, 3).unwrap().points).unwrap();
        assert_eq!(all.len(), 3);
        assert_eq!(distance_set(&f3, &[]).unwrap_err(), Error::EmptyInput);
    }

    #[test]
    fn lines() {
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(
            line_of(&f3, &pt(&f3, &[0, 0, 2])).unwrap(),
            line_of(&f3, &pt(&f3, &[0, 0, 1])).unwrap()
        );
        assert_eq!(line_of(&f3, &pt(&f3, &[1, 1, 1])).unwrap_err(), Error::Isotropic);
        // Q(1,1,0) = 2, a non-square mod 3
        assert_eq!(line_of(&f3, &pt(&f3, &[1, 1, 0])).unwrap_err(), Error::NonSquareType);

        let f5 = FieldSpec::prime(5).unwrap();
        let l = line_of(&f5, &pt(&f5, &[2, 0, 0])).unwrap();
        assert_eq!(l.rep(), &pt(&f5, &[1, 0, 0]));
        let u = pt(&f5, &[0, 4, 0]);
        assert_eq!(line_of(&f5, &u).unwrap().rep(), &pt(&f5, &[0, 1, 0]));
    }

    #[test]
    fn omega_small() {
        let f3 = FieldSpec::prime(3).unwrap();
        let om = omega_build(&f3, 3).unwrap();
        let reps: Vec<&PointVec> = om.lines().iter().map(|l| l.rep()).collect();
        assert_eq!(
            reps,
            vec![&pt(&f3, &[0, 0, 1]), &pt(&f3, &[0, 1, 0]), &pt(&f3, &[1, 0, 0])]
        );
        assert_eq!(omega_build(&FieldSpec::prime(5).unwrap(), 3).unwrap().len(), 15);
    }

    #[test]
    fn lift_examples() {
        let f3 = FieldSpec::prime(3).unwrap();
        let om = omega_build(&f3, 3).unwrap();
        let x = pt(&f3, &[1, 0, 0]);
        let l = lift(&f3, std::slice::from_ref(&x), &om).unwrap();
        assert_eq!(l.len(), 1);
        let l = lift(&f3, &[x.clone(), x.neg(&f3)], &om).unwrap();
        assert_eq!((l.len(), l.multiplicity.clone()), (1, vec![2]));
        let l = lift(&f3, &[x.clone(), x.neg(&f3), pt(&f3, &[0, 1, 0])], &om).unwrap();
        assert_eq!(l.lines, vec![1, 2]);
        assert_eq!(l.multiplicity, vec![1, 2]);
        assert_eq!(lift(&f3, &[pt(&f3, &[1, 1, 0])], &om).unwrap_err(), Error::NotOnSphere);
    }
}
