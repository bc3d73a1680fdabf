//! Strategies shared by the property tests.
#![allow(dead_code)]

use proptest::prelude::*;

use coverlab::coverspace::{close_subbase, regular_reflection, SubbasePresentation};
use coverlab::finkernel::{Cover, FiniteCoverSpace, FnTable, Limits, Subset};

/// A cover of `n` elements: random members, with the uncovered part added
/// as one more member.
pub fn cover_on(n: usize) -> impl Strategy<Value = Cover> {
    prop::collection::vec(0..1u64 << n, 1..5).prop_map(move |bits| {
        let full = (1u64 << n) - 1;
        let mut members: Vec<Subset> = bits.iter().map(|&b| Subset::from_bits(n, b)).collect();
        let missing = full & !bits.iter().fold(0, |a, b| a | b);
        if missing != 0 {
            members.push(Subset::from_bits(n, missing));
        }
        Cover::new(n, members).unwrap()
    })
}

pub fn cover() -> impl Strategy<Value = Cover> {
    (1..=4usize).prop_flat_map(cover_on)
}

/// Any precover structure, from a subbase of one to three covers.
pub fn precover_on(n: usize) -> impl Strategy<Value = FiniteCoverSpace> {
    prop::collection::vec(cover_on(n), 1..4)
        .prop_map(move |cs| close_subbase(&SubbasePresentation::new(n, cs).unwrap()))
}

pub fn precover(max_n: usize) -> impl Strategy<Value = FiniteCoverSpace> {
    (1..=max_n).prop_flat_map(precover_on)
}

/// A cover space: the regular reflection of a random precover.
pub fn space(max_n: usize) -> impl Strategy<Value = FiniteCoverSpace> {
    (1..=max_n).prop_flat_map(space_on)
}

pub fn space_on(n: usize) -> impl Strategy<Value = FiniteCoverSpace> {
    precover_on(n).prop_map(|s| regular_reflection(&s, &Limits::DEFAULT).unwrap())
}

pub fn map_into(domain: usize, codomain: usize) -> impl Strategy<Value = FnTable> {
    prop::collection::vec(0..codomain, domain).prop_map(move |v| FnTable::new(codomain, v).unwrap())
}

pub fn subset_of(n: usize) -> impl Strategy<Value = Subset> {
    (0..1u64 << n).prop_map(move |b| Subset::from_bits(n, b))
}
