//! Universal displays and the ideal cutting out the non-ordinary locus.
use cmlocus::padic::Zp2;
use cmlocus::report::poly_string;
use cmlocus::series::Window;
use cmlocus::window::{hasse_witt_ideal, tensor_zp2, universal_display};

fn main() -> cmlocus::Result<()> {
    let r = Zp2::new(3, 4)?;
    let win = Window::new(0, 6, 3);
    for nvars in [1, 2] {
        let d = universal_display(r, win, nvars);
        println!("{nvars}-variable display on {:?}:", d.labels);
        for row in &d.entries {
            println!("  [{}]", row.iter().map(poly_string).collect::<Vec<_>>().join(", "));
        }
        println!("  Hasse-Witt ideal {}", hasse_witt_ideal(&d));
    }
    let d4 = tensor_zp2(&universal_display(r, win, 1));
    println!("tensored with Z_(p^2): rank {}, Hasse-Witt ideal {}", d4.dim(), hasse_witt_ideal(&d4));
    Ok(())
}
