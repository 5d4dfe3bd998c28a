//! Isomorphism invariants used to group search findings. Equal digests do
//! not imply isomorphic rings; different digests rule it out.

use ringforge::search::Fingerprint;
use ringforge::verify::builtin_ring;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for name in ["f2q8", "f2q8-op", "ex-fq", "ex232-j4", "ex232-j4-op", "semicomm16", "semicomm16-op"] {
        let ring = builtin_ring(name).ok_or("no such corpus ring")??;
        let f = Fingerprint::compute(&ring)?;
        println!(
            "{} {name:<14} order {} D {:?} units {} socles {}/{}",
            &f.digest()[..16],
            f.order,
            f.d_sequence,
            f.units,
            f.socle_left,
            f.socle_right
        );
    }
    Ok(())
}
