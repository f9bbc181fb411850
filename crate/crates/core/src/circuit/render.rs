use super::{Circuit, Gate};

enum Column {
    Cnot { control: usize },
    Singles([Option<String>; 2]),
}

/// Draws the circuit as two text rows, wire 1 on top.
///
/// Single-qubit gates on different wires share a column when no CNOT
/// separates them. CNOTs draw `●` on the control and `⊕` on the target.
pub fn render_ascii(c: &Circuit) -> String {
    let mut columns: Vec<Column> = Vec::new();
    for g in &c.gates {
        match g {
            Gate::Cnot { control, .. } => columns.push(Column::Cnot { control: *control }),
            Gate::Single { wire, label, .. } => {
                let boxed = format!("[{label}]");
                match columns.last_mut() {
                    Some(Column::Singles(slots)) if slots[*wire].is_none() => {
                        slots[*wire] = Some(boxed)
                    }
                    _ => {
                        let mut slots = [None, None];
                        slots[*wire] = Some(boxed);
                        columns.push(Column::Singles(slots));
                    }
                }
            }
        }
    }

    // rows[0] is wire 1, rows[1] is wire 0.
    let mut rows = [String::from("─"), String::from("─")];
    for col in &columns {
        match col {
            Column::Cnot { control } => {
                let (top, bottom) = if *control == 1 {
                    ("●", "⊕")
                } else {
                    ("⊕", "●")
                };
                rows[0].push_str(top);
                rows[1].push_str(bottom);
            }
            Column::Singles(slots) => {
                let width = slots
                    .iter()
                    .flatten()
                    .map(|s| s.chars().count())
                    .max()
                    .unwrap_or(1);
                for (row, wire) in [(0, 1), (1, 0)] {
                    let cell = slots[wire].clone().unwrap_or_default();
                    let pad = width - cell.chars().count();
                    rows[row].push_str(&cell);
                    rows[row].push_str(&"─".repeat(pad));
                }
            }
        }
        rows[0].push('─');
        rows[1].push('─');
    }
    format!("{}\n{}\n", rows[0], rows[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Mat2;

    #[test]
    fn single_cnot() {
        let s = render_ascii(&Circuit::new().cnot(1, 0));
        assert_eq!(s, "─●─\n─⊕─\n");
        let s = render_ascii(&Circuit::new().cnot(0, 1));
        assert_eq!(s, "─⊕─\n─●─\n");
    }

    #[test]
    fn empty_is_two_bare_wires() {
        assert_eq!(render_ascii(&Circuit::new()), "─\n─\n");
    }

    #[test]
    fn c1_shape() {
        let p = Mat2::H;
        let c = Circuit::new()
            .single(1, "E", Mat2::phase(0.4))
            .single(0, "P†", p.dagger())
            .cnot(1, 0)
            .single(0, "P", p);
        let s = render_ascii(&c);
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "─[E]──●─────");
        assert_eq!(lines[1], "─[P†]─⊕─[P]─");
    }
}
