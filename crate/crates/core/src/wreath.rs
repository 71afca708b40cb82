//! Wreath products and the standard groups used to build them.
//!
//! Product action layout: a tuple `(x_0, …, x_{d-1}) ∈ Δ^d` is the point
//! `Σ x_j·m^(d-1-j)`, so the last coordinate varies fastest. A top element
//! `σ` moves coordinate `j` to position `jσ`, i.e. `(x^σ)_{jσ} = x_j`.
//!
//! Worked example with `m = 5`, `d = 2`: the point `(x_0, x_1) = (1, 3)` is
//! `1·5 + 3 = 8`. The coordinate swap sends it to `(3, 1) = 16`, and `h`
//! acting on coordinate 0 sends it to `(1^h, 3)`.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::{Permutation, Point};

pub const DEFAULT_DEGREE_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WreathAction {
    Imprimitive,
    Product,
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

pub fn sym(n: usize) -> PermGroup {
    let mut gens = Vec::new();
    if n >= 2 {
        gens.push(Permutation::from_cycles_unchecked(n, &[(0..2).collect()]));
    }
    if n >= 3 {
        gens.push(Permutation::from_cycles_unchecked(n, &[(0..n).collect()]));
    }
    PermGroup::new(n, gens)
        .expect("positive degree")
        .with_order_hint(factorial(n))
        .with_name(format!("S{n}"))
}

pub fn alt(n: usize) -> PermGroup {
    let mut gens = Vec::new();
    if n >= 3 {
        gens.push(Permutation::from_cycles_unchecked(n, &[(0..3).collect()]));
    }
    if n >= 4 {
        let long: Vec<usize> = if n % 2 == 1 {
            (0..n).collect()
        } else {
            (1..n).collect()
        };
        gens.push(Permutation::from_cycles_unchecked(n, &[long]));
    }
    let order = if n >= 2 {
        factorial(n) / 2u32
    } else {
        BigUint::one()
    };
    PermGroup::new(n, gens)
        .expect("positive degree")
        .with_order_hint(order)
        .with_name(format!("A{n}"))
}

/// `m^d`, or an error above `cap`.
pub fn product_degree(m: usize, d: usize, cap: usize) -> Result<usize> {
    let degree = (m as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
    if degree > cap as u128 {
        return Err(Error::DegreeCap { degree, cap });
    }
    Ok(degree as usize)
}

/// `h` acting on coordinate `j` of `Δ^d`.
pub fn embed_coordinate(h: &Permutation, d: usize, j: usize) -> Permutation {
    let m = h.degree();
    let stride = m.pow((d - 1 - j) as u32);
    let degree = m.pow(d as u32);
    let images = (0..degree)
        .map(|x| {
            let digit = (x / stride) % m;
            (x + (h.image(digit) * stride) - digit * stride) as Point
        })
        .collect();
    Permutation::from_images_unchecked(images)
}

/// `σ ∈ S_d` permuting the coordinates of `Δ^d`.
pub fn embed_top(sigma: &Permutation, m: usize) -> Permutation {
    let d = sigma.degree();
    let degree = m.pow(d as u32);
    let strides: Vec<usize> = (0..d).map(|j| m.pow((d - 1 - j) as u32)).collect();
    let images = (0..degree)
        .map(|x| {
            let mut y = 0;
            for j in 0..d {
                let digit = (x / strides[j]) % m;
                y += digit * strides[sigma.image(j)];
            }
            y as Point
        })
        .collect();
    Permutation::from_images_unchecked(images)
}

/// Mixed-radix digits of `x`, most significant first.
pub fn digits(x: usize, m: usize, d: usize) -> Vec<usize> {
    let mut out = vec![0; d];
    let mut x = x;
    for j in (0..d).rev() {
        out[j] = x % m;
        x /= m;
    }
    out
}

pub fn from_digits(digits: &[usize], m: usize) -> usize {
    digits.iter().fold(0, |acc, &x| acc * m + x)
}

fn wreath_order(h: &PermGroup, k: &PermGroup) -> BigUint {
    h.order().pow(k.degree() as u32) * k.order()
}

/// `H ≀ K` on `m·d` points; copy `i` of `Δ` is `i·m..(i+1)·m`.
pub fn imprimitive_wreath(h: &PermGroup, k: &PermGroup) -> PermGroup {
    let (m, d) = (h.degree(), k.degree());
    let n = m * d;
    let mut gens = Vec::new();
    for orbit in k.orbits().blocks() {
        let offset = orbit[0] * m;
        for g in h.generators().iter().filter(|g| !g.is_identity()) {
            let mut images: Vec<Point> = (0..n as Point).collect();
            for a in 0..m {
                images[offset + a] = (offset + g.image(a)) as Point;
            }
            gens.push(Permutation::from_images_unchecked(images));
        }
    }
    for s in k.generators().iter().filter(|g| !g.is_identity()) {
        let images = (0..n)
            .map(|x| (s.image(x / m) * m + x % m) as Point)
            .collect();
        gens.push(Permutation::from_images_unchecked(images));
    }
    PermGroup::new(n, gens)
        .expect("positive degree")
        .with_order_hint(wreath_order(h, k))
}

/// `H ≀ K` in product action on `m^d` points.
pub fn product_action_wreath(h: &PermGroup, k: &PermGroup) -> Result<PermGroup> {
    product_action_wreath_capped(h, k, DEFAULT_DEGREE_CAP)
}

pub fn product_action_wreath_capped(h: &PermGroup, k: &PermGroup, cap: usize) -> Result<PermGroup> {
    let (m, d) = (h.degree(), k.degree());
    let n = product_degree(m, d, cap)?;
    let mut gens = Vec::new();
    // one copy of H per K-orbit suffices
    for orbit in k.orbits().blocks() {
        for g in h.generators().iter().filter(|g| !g.is_identity()) {
            gens.push(embed_coordinate(g, d, orbit[0]));
        }
    }
    for s in k.generators().iter().filter(|g| !g.is_identity()) {
        gens.push(embed_top(s, m));
    }
    Ok(PermGroup::new(n, gens)
        .expect("positive degree")
        .with_order_hint(wreath_order(h, k)))
}

pub fn wreath(h: &PermGroup, k: &PermGroup, action: WreathAction) -> Result<PermGroup> {
    match action {
        WreathAction::Imprimitive => Ok(imprimitive_wreath(h, k)),
        WreathAction::Product => product_action_wreath(h, k),
    }
}

/// Component-wise `T^ℓ` on `m^ℓ` points.
pub fn direct_power(t: &PermGroup, ell: usize) -> Result<PermGroup> {
    let n = product_degree(t.degree(), ell, DEFAULT_DEGREE_CAP)?;
    let gens = (0..ell)
        .flat_map(|j| {
            t.generators()
                .iter()
                .map(move |g| embed_coordinate(g, ell, j))
        })
        .filter(|g| !g.is_identity())
        .collect();
    Ok(PermGroup::new(n, gens)
        .expect("positive degree")
        .with_order_hint(t.order().pow(ell as u32)))
}

/// `N_{Sym Δ}(T) ≀ S_ℓ` in product action, the normalizer of `T^ℓ`.
pub fn socle_normalizer(t: &PermGroup, nt: &PermGroup, ell: usize) -> Result<PermGroup> {
    if !nt.is_subgroup(t)? || !nt.is_normal(t)? {
        return Err(Error::NotNormal);
    }
    product_action_wreath(nt, &sym(ell))
}

/// `C_ℓ` generated by `(1,…,ℓ)`.
pub fn cyclic(n: usize) -> PermGroup {
    let gens = if n >= 2 {
        vec![Permutation::from_cycles_unchecked(n, &[(0..n).collect()])]
    } else {
        Vec::new()
    };
    PermGroup::new(n, gens)
        .expect("positive degree")
        .with_order_hint(BigUint::from(n))
        .with_name(format!("C{n}"))
}

/// `A5 ≅ PSL(2,5)` acting on the six right cosets of the dihedral subgroup
/// `⟨(1,2,3,4,5), (2,5)(3,4)⟩`, cosets numbered in breadth-first order from
/// the subgroup itself.
pub fn psl25_on_6() -> PermGroup {
    let a5 = alt(5);
    let d10 = PermGroup::new(
        5,
        vec![
            Permutation::from_cycles_unchecked(5, &[(0..5).collect()]),
            Permutation::from_cycles_unchecked(5, &[vec![1, 4], vec![2, 3]]),
        ],
    )
    .expect("degree 5");
    // a right coset D·g is identified by its sorted element list
    let key = |g: &Permutation| {
        let mut elems: Vec<Permutation> = d10.elements().iter().map(|d| d * g).collect();
        elems.sort();
        elems
    };
    let mut reps = vec![Permutation::identity(5)];
    let mut keys = vec![key(&reps[0])];
    let mut i = 0;
    while i < reps.len() {
        for g in a5.generators() {
            let next = &reps[i] * g;
            let k = key(&next);
            if !keys.contains(&k) {
                keys.push(k);
                reps.push(next);
            }
        }
        i += 1;
    }
    let gens = a5
        .generators()
        .iter()
        .map(|g| {
            let images = reps
                .iter()
                .map(|r| {
                    let k = key(&(r * g));
                    keys.iter()
                        .position(|x| *x == k)
                        .expect("cosets are permuted") as Point
                })
                .collect();
            Permutation::from_images_unchecked(images)
        })
        .collect();
    PermGroup::new(6, gens)
        .expect("degree 6")
        .with_order_hint(BigUint::from(60u32))
        .with_name("PSL(2,5)")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn order(g: &PermGroup) -> u64 {
        g.order().to_u64().unwrap()
    }

    fn plain(g: &PermGroup) -> PermGroup {
        // drops the order hint so the chain is built from scratch
        PermGroup::new(g.degree(), g.generators().to_vec()).unwrap()
    }

    #[test]
    fn symmetric_and_alternating() {
        assert_eq!(order(&plain(&sym(5))), 120);
        assert_eq!(order(&plain(&alt(5))), 60);
        assert_eq!(order(&plain(&alt(3))), 3);
        assert_eq!(order(&plain(&alt(6))), 360);
        assert_eq!(order(&plain(&sym(1))), 1);
        assert_eq!(order(&plain(&alt(2))), 1);
    }

    #[test]
    fn imprimitive_orders() {
        let w = imprimitive_wreath(&alt(5), &sym(2));
        assert_eq!(w.degree(), 10);
        assert_eq!(order(&plain(&w)), 7200);
        let h = imprimitive_wreath(&alt(5), &PermGroup::trivial(1));
        assert_eq!(order(&plain(&h)), 60);
        let t = imprimitive_wreath(&PermGroup::trivial(1), &sym(3));
        assert_eq!(t.degree(), 3);
        assert_eq!(order(&plain(&t)), 6);
        // intransitive top: every block still gets its own copy of H
        let flat = imprimitive_wreath(&sym(3), &PermGroup::trivial(2));
        assert_eq!(order(&plain(&flat)), 36);
    }

    #[test]
    fn product_action_orders() {
        let w = product_action_wreath(&alt(5), &sym(2)).unwrap();
        assert_eq!(w.degree(), 25);
        assert_eq!(order(&plain(&w)), 7200);
        let s = product_action_wreath(&sym(5), &sym(2)).unwrap();
        assert_eq!(order(&plain(&s)), 28800);
        let h = product_action_wreath(&alt(5), &PermGroup::trivial(1)).unwrap();
        assert_eq!(h.degree(), 5);
        assert_eq!(order(&plain(&h)), 60);
        let c = product_action_wreath(&alt(5), &cyclic(3)).unwrap();
        assert_eq!(order(&plain(&c)), 60u64.pow(3) * 3);
    }

    #[test]
    fn product_action_contains_base_group() {
        let w = product_action_wreath(&sym(4), &cyclic(3)).unwrap();
        for j in 0..3 {
            for g in sym(4).generators() {
                assert!(w.contains(&embed_coordinate(g, 3, j)).unwrap());
            }
        }
    }

    #[test]
    fn twenty_five_point_layout() {
        let swap = embed_top(&Permutation::parse_cycles(2, "(1,2)").unwrap(), 5);
        assert_eq!(swap.image(8), 16);
        let h = Permutation::parse_cycles(5, "(1,2,3,4,5)").unwrap();
        // (1, 3) -> (2, 3)
        assert_eq!(embed_coordinate(&h, 2, 0).image(8), 13);
        // (1, 3) -> (1, 4)
        assert_eq!(embed_coordinate(&h, 2, 1).image(8), 9);
        assert_eq!(digits(8, 5, 2), vec![1, 3]);
        assert_eq!(from_digits(&[1, 3], 5), 8);
    }

    #[test]
    fn top_action_convention() {
        // (x^σ)_{jσ} = x_j for σ = (1,2,3)
        let sigma = Permutation::parse_cycles(3, "(1,2,3)").unwrap();
        let top = embed_top(&sigma, 4);
        let x = [1, 2, 3];
        let y = digits(top.image(from_digits(&x, 4)), 4, 3);
        for j in 0..3 {
            assert_eq!(y[sigma.image(j)], x[j]);
        }
        // right action: embedding is a homomorphism
        let tau = Permutation::parse_cycles(3, "(1,2)").unwrap();
        assert_eq!(embed_top(&(&sigma * &tau), 4), &top * &embed_top(&tau, 4));
    }

    #[test]
    fn socle_normalizer_of_a5_squared() {
        let m = socle_normalizer(&alt(5), &sym(5), 2).unwrap();
        assert_eq!(m.degree(), 25);
        assert_eq!(order(&plain(&m)), 28800);
        let t2 = direct_power(&alt(5), 2).unwrap();
        assert!(m.is_normal(&t2).unwrap());
        let one = socle_normalizer(&alt(5), &sym(5), 1).unwrap();
        assert_eq!(order(&one), 120);
        assert!(matches!(
            socle_normalizer(&sym(5), &alt(5), 2),
            Err(Error::NotNormal)
        ));
    }

    #[test]
    fn a7_socle_normalizer() {
        let m = socle_normalizer(&alt(7), &sym(7), 2).unwrap();
        assert_eq!(m.degree(), 49);
        assert_eq!(order(&plain(&m)), 5040u64 * 5040 * 2);
    }

    #[test]
    fn degree_cap() {
        assert!(matches!(
            product_action_wreath_capped(&sym(5), &sym(3), 100),
            Err(Error::DegreeCap {
                degree: 125,
                cap: 100
            })
        ));
    }

    #[test]
    fn psl25_is_transitive_a5() {
        let p = psl25_on_6();
        assert_eq!(order(&plain(&p)), 60);
        assert!(p.is_transitive());
        assert!(p.generators().iter().all(|g| g.is_even()));
    }
}
