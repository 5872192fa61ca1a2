//! Joint smallest-free search over two vertex palettes.

use arbcolour::{EdgeKey, Palette};

fn main() {
    let mut a = Palette::for_delta(8);
    let mut b = Palette::for_delta(8);
    let e = |u, v| EdgeKey::new(u, v).unwrap();

    for (c, w) in [(1, 10), (2, 11), (4, 12)] {
        a.mark(c, e(0, w)).unwrap();
    }
    for (c, w) in [(1, 20), (3, 21), (5, 22)] {
        b.mark(c, e(1, w)).unwrap();
    }

    println!(
        "a uses {} colours, b uses {}",
        a.used_count(),
        b.used_count()
    );
    println!("a has {} used in [1, 4]", a.range_count(1, 4).unwrap());
    println!("smallest colour free at both: {}", a.find_joint_free(&b));

    a.unmark(2).unwrap();
    println!("after freeing 2 at a: {}", a.find_joint_free(&b));
    assert!(a.verify_tree());
}
