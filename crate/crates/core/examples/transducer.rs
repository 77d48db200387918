//! The backward step as a Moore machine: replay the rule 30 example, list
//! Hamiltonian cycles, and count them for every radius-1 rule pair.
//!
//! ```bash
//! cargo run --example transducer > /dev/null   # summary only on stderr
//! cargo run --example transducer | dot -Tsvg > machine.svg
//! ```

use hca::graph::{build_backward_transducer, export_dot, hamiltonian_cycles};
use hca::lattice::{Direction, Lattice};
use hca::rule::Rule;

fn main() -> hca::Result<()> {
    let machine = build_backward_transducer(&Rule::elementary(30), &Rule::elementary(15))?;
    let config = Lattice::from_bit_str("0100101")?;
    eprintln!("pre-image of {config}: {}", machine.backward_step(&config)?);

    let (path, _) = machine.run(&[1, 0, 1, 0, 1, 0, 0])?;
    let names: Vec<String> = path.iter().map(|&s| machine.states()[s].name()).collect();
    eprintln!("state walk: {}", names.join(" "));

    for cycle in hamiltonian_cycles(&machine)? {
        let names: Vec<String> = cycle.iter().map(|q| format!("q{q}")).collect();
        eprintln!("cycle: {}", names.join(" "));
    }

    eprintln!("\nrule border dir cycles");
    for number in 0..=255u8 {
        let main = Rule::elementary(number);
        for (dir, borders) in [(Direction::Left, [15u8, 240]), (Direction::Right, [85, 170])] {
            if !main.is_toggle(dir) {
                continue;
            }
            for b in borders {
                let m = build_backward_transducer(&main, &Rule::elementary(b))?;
                eprintln!("{number:>4} {b:>6} {dir:>5} {:>4}", hamiltonian_cycles(&m)?.len());
            }
        }
    }

    print!("{}", export_dot(&machine));
    Ok(())
}
