use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use jordpack_core::antipodes::{exists_antipodal_packet, packet_level_antipodes};
use jordpack_core::packets::build_packet;
use jordpack_core::speh::speh_determinant;
use jordpack_core::unramified::{count_isolated, count_strongly_negative};
use jordpack_core::{ComponentGroup, GroupFamily, GroupKind, Registry};

fn counts(c: &mut Criterion) {
    let fam = GroupFamily::sp(170);
    c.bench_function("count Sp170", |b| {
        b.iter(|| count_strongly_negative(black_box(fam)))
    });
    c.bench_function("count Sp170 isolated", |b| {
        b.iter(|| count_isolated(black_box(fam)))
    });
}

fn packets(c: &mut Criterion) {
    let reg = Registry::builtin();
    let (fam, set) = reg
        .parse_jordan("Sp12: triv:1, triv:3, triv:5, psi1:1, psi1:3, psi1:5, psi1:7")
        .unwrap();
    c.bench_function("packet Sp12 two lines", |b| {
        b.iter(|| {
            let g = ComponentGroup::new(fam, set.clone()).unwrap();
            build_packet(&g).unwrap()
        })
    });
}

fn speh(c: &mut Criterion) {
    let triv = Registry::builtin().trivial().unwrap();
    c.bench_function("speh l=2 m=6", |b| {
        b.iter(|| speh_determinant(&triv, 2, black_box(6)).unwrap())
    });
}

fn antipodes(c: &mut Criterion) {
    let space = Registry::builtin().quad_space();
    c.bench_function("antipodes arithmetic Sp 1..=60", |b| {
        b.iter(|| {
            for n in 1..=60 {
                black_box(exists_antipodal_packet(GroupKind::Sp, n, space));
            }
        })
    });
    c.bench_function("antipodes packets Sp 1..=20", |b| {
        b.iter(|| {
            for n in 1..=20 {
                black_box(packet_level_antipodes(GroupKind::Sp, n, space).unwrap());
            }
        })
    });
}

criterion_group!(benches, counts, packets, speh, antipodes);
criterion_main!(benches);
