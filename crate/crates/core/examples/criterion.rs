//! Which `px+r` maps have chain structure, with a numerical check of the
//! family identity and of where family tails land.

use syrdyn::chains::{
    family_tails, verify_family_connection, verify_family_identity, CriterionVerdict, FamilySamples,
};

fn main() {
    for p in [3i64, 5, 7, 9] {
        for r in (-(p - 1)..p).filter(|r| r % 2 != 0) {
            let Ok(v) = CriterionVerdict::new(p, r) else {
                continue;
            };
            if !v.chain_structure {
                continue;
            }
            let id = verify_family_identity(p, r, &FamilySamples::default()).unwrap();
            let conn =
                verify_family_connection(p, r, &family_tails(p, r, 200, 1).unwrap()).unwrap();
            println!(
                "p={p} r={r}: class {} mod {p}, identity {}/{}, tails {}/{}",
                v.two_preimage_class, id.satisfied, id.tested, conn.landed, conn.tested
            );
        }
    }
}
