//! Arithmetic in Z_{p^2} modulo p^N: Frobenius, valuations, inverses.
use cmlocus::padic::Zp2;

fn main() -> cmlocus::Result<()> {
    for p in [3, 5, 7] {
        let r = Zp2::new(p, 6)?;
        let w = r.scalar(r.omega());
        let x = r.int(1) + w;
        let y = r.int(p as i64) * w - r.int(2);
        println!("p={p} N=6 max N={}  w^2 = {}", Zp2::max_precision(p), w * w);
        println!("  x = {x}  sigma(x) = {}  x*sigma(x) = {}", x.sigma(), x * x.sigma());
        println!("  y = {y}  v(y) = {}  v(p^3 y) = {}", y.valuation(), (r.int(p.pow(3) as i64) * y).valuation());
        let xi = x.invert()?;
        println!("  1/x = {xi}  x * (1/x) = {}", x * xi);
        println!("  (x*y)^sigma == x^sigma * y^sigma: {}", (x * y).sigma() == x.sigma() * y.sigma());
    }
    Ok(())
}
