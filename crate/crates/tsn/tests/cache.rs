use std::fs;

use tsn::cache::{read_table, var_order_hash, write_table, Header, TableStore};
use tsn_core::minors::minor;
use tsn_core::solver::{CompiledMinor, EvalTable};
use tsn_core::{Field, Lattice, Placement, PointSpace};

fn setup(q: u32) -> (Lattice, Placement, Field, PointSpace) {
    let l = Lattice::new(4).unwrap();
    let p = Placement::new(&l, [2, 5, 7, 10]).unwrap();
    (l, p, Field::new(q).unwrap(), PointSpace::new(q, 12, true))
}

#[test]
fn round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (l, p, f, space) = setup(3);
    let t = EvalTable::build(&f, &CompiledMinor::new(&minor(&l, &p), &f), space);
    let h = Header::new(&l, &p, &f, space);
    let path = dir.path().join("t.evt");
    write_table(&path, &h, &t).unwrap();
    assert_eq!(read_table(&path, &h, space).unwrap(), t);
    let bytes = fs::read(&path).unwrap();
    assert_eq!(&bytes[..8], b"TSNEVTB\0");
}

#[test]
fn mismatched_headers_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let (l, p, f, space) = setup(3);
    let t = EvalTable::build(&f, &CompiledMinor::new(&minor(&l, &p), &f), space);
    let h = Header::new(&l, &p, &f, space);
    let path = dir.path().join("t.evt");
    write_table(&path, &h, &t).unwrap();
    let other = Placement::new(&l, [1, 4, 5, 10]).unwrap();
    assert!(read_table(&path, &Header::new(&l, &other, &f, space), space).is_err());
    let mut h2 = h.clone();
    h2.var_hash[0] ^= 1;
    assert!(read_table(&path, &h2, space).is_err());
    let mut h3 = h.clone();
    h3.modulus = vec![1, 1, 1];
    assert!(read_table(&path, &h3, space).is_err());

    let mut bytes = fs::read(&path).unwrap();
    bytes.truncate(bytes.len() - 3);
    fs::write(&path, &bytes).unwrap();
    assert!(read_table(&path, &h, space).is_err());
}

#[test]
fn var_hash_depends_on_lattice() {
    let a = var_order_hash(&Lattice::new(3).unwrap());
    let b = var_order_hash(&Lattice::new(4).unwrap());
    assert_ne!(a, b);
    assert_eq!(a, var_order_hash(&Lattice::new(3).unwrap()));
}

#[test]
fn store_hits_and_rebuilds() {
    let dir = tempfile::tempdir().unwrap();
    let store = TableStore::new(Some(dir.path().join("c"))).unwrap();
    let (l, p, f, space) = setup(4);
    let cm = CompiledMinor::new(&minor(&l, &p), &f);
    let direct = EvalTable::build(&f, &cm, space);
    assert_eq!(store.table(&l, &p, &f, &cm, space).unwrap(), direct);
    assert_eq!((store.hits(), store.misses()), (0, 1));
    assert_eq!(store.table(&l, &p, &f, &cm, space).unwrap(), direct);
    assert_eq!((store.hits(), store.misses()), (1, 1));

    let path = store.path_for(&Header::new(&l, &p, &f, space)).unwrap();
    fs::write(&path, b"garbage").unwrap();
    assert_eq!(store.table(&l, &p, &f, &cm, space).unwrap(), direct);
    assert_eq!(store.misses(), 2);
    assert_eq!(store.table(&l, &p, &f, &cm, space).unwrap(), direct);
    assert_eq!(store.hits(), 2);
}

#[test]
fn memory_store_always_builds() {
    let store = TableStore::new(None).unwrap();
    let (l, p, f, space) = setup(2);
    let cm = CompiledMinor::new(&minor(&l, &p), &f);
    store.table(&l, &p, &f, &cm, space).unwrap();
    store.table(&l, &p, &f, &cm, space).unwrap();
    assert_eq!((store.hits(), store.misses()), (0, 2));
}

#[test]
fn parallel_build_matches_sequential() {
    for q in [3, 4, 5] {
        let (l, p, f, _) = setup(q);
        let space = PointSpace::new(q, 12, true);
        let cm = CompiledMinor::new(&minor(&l, &p), &f);
        if space.len() > 1 << 22 {
            continue;
        }
        assert_eq!(
            tsn::parallel::build_table(&f, &cm, space),
            EvalTable::build(&f, &cm, space)
        );
    }
}
