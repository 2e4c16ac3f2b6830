//! The two infinite families of pairs `(A, B)` where no inverse-closed
//! `S ⊆ A∖B` reaches Cayley index 2, with their witnessing automorphisms.

use crate::error::{Error, Result};
use crate::group::{AbelianGroup, IsoType, Subgroup};

use super::GroupAutomorphism;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExceptionalFamily {
    /// `A ≅ C4 × C2^ℓ` (ℓ ≥ 1), `B ≅ C2^{ℓ+1}`.
    C4TimesElementary { ell: usize },
    /// `A ≅ C4² × C2^ℓ` (ℓ ≥ 0), `B ≅ C4 × C2^{ℓ+1}`.
    C4SquaredTimesElementary { ell: usize },
}

/// Classify `(A, B)` against the two exceptional families by invariant factors.
pub fn is_exceptional_pair(group: &AbelianGroup, b: &Subgroup) -> Option<ExceptionalFamily> {
    let a_type = group.iso_type().0;
    let b_type = b.iso_type(group).0;
    let twos = a_type.iter().take_while(|&&d| d == 2).count();
    let rest = &a_type[twos..];
    if rest == [4] && twos >= 1 && b_type == IsoType::elementary2(twos + 1).0 {
        return Some(ExceptionalFamily::C4TimesElementary { ell: twos });
    }
    if rest == [4, 4] {
        let mut want = vec![2; twos + 1];
        want.push(4);
        if b_type == want {
            return Some(ExceptionalFamily::C4SquaredTimesElementary { ell: twos });
        }
    }
    None
}

/// `A = C4 × C2^ℓ = <x> × <y_1> × ... × <y_ℓ>`, `B = <x², y_1, ..., y_ℓ>` and
/// `α: x ↦ -x, y_1 ↦ 2x + y_1, y_i ↦ y_i (i ≥ 2)`.
pub fn example1_automorphism(ell: usize) -> Result<(AbelianGroup, Subgroup, GroupAutomorphism)> {
    if ell < 1 {
        return Err(Error::BadParameter("example 1 needs ell >= 1".into()));
    }
    let mut orders = vec![4u64];
    orders.extend(std::iter::repeat_n(2, ell));
    let group = AbelianGroup::new(&orders)?;
    let x = group.basis_element(0);
    let ys: Vec<usize> = (1..=ell).map(|i| group.basis_element(i)).collect();
    let mut b_gens = vec![group.add(x, x)];
    b_gens.extend(&ys);
    let b = group.generated_subgroup(&b_gens);
    let mut images = vec![group.neg(x)];
    images.push(group.add(group.add(x, x), ys[0]));
    images.extend(&ys[1..]);
    let alpha = GroupAutomorphism::from_basis_images(&group, &images)?;
    Ok((group, b, alpha))
}

/// `A = C4² × C2^ℓ = <x_1> × <x_2> × <y_1> × ... × <y_ℓ>`,
/// `B = <x_1², x_2, y_1, ..., y_ℓ>` and `α: x_1 ↦ x_1, x_2 ↦ 2x_1 - x_2, y_i ↦ y_i`.
pub fn example2_automorphism(ell: usize) -> Result<(AbelianGroup, Subgroup, GroupAutomorphism)> {
    let mut orders = vec![4u64, 4];
    orders.extend(std::iter::repeat_n(2, ell));
    let group = AbelianGroup::new(&orders)?;
    let x1 = group.basis_element(0);
    let x2 = group.basis_element(1);
    let ys: Vec<usize> = (2..2 + ell).map(|i| group.basis_element(i)).collect();
    let mut b_gens = vec![group.add(x1, x1), x2];
    b_gens.extend(&ys);
    let b = group.generated_subgroup(&b_gens);
    let mut images = vec![x1, group.sub(group.add(x1, x1), x2)];
    images.extend(&ys);
    let alpha = GroupAutomorphism::from_basis_images(&group, &images)?;
    Ok((group, b, alpha))
}
