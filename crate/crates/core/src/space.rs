use crate::Error;

/// Declared base dimension and field labels of a session.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Space {
    dim: usize,
    fields: Vec<String>,
    axes: Vec<String>,
}

impl Space {
    pub fn new<S: AsRef<str>>(dim: usize, fields: &[S]) -> Result<Self, Error> {
        if dim == 0 {
            return Err(Error::Dimension("spatial dimension must be at least 1".into()));
        }
        let axes: Vec<String> = if dim <= 3 {
            ["x", "y", "z"][..dim].iter().map(|s| s.to_string()).collect()
        } else {
            (1..=dim).map(|i| format!("x{i}")).collect()
        };
        let mut names = Vec::with_capacity(fields.len());
        for f in fields {
            let f = f.as_ref().trim();
            let valid = f.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && f.chars().all(|c| c.is_ascii_alphanumeric());
            if !valid {
                return Err(Error::Problem(format!("invalid field name `{f}`")));
            }
            if is_reserved(f) || axes.iter().any(|a| a == f) {
                return Err(Error::Problem(format!("field name `{f}` is reserved")));
            }
            if names.iter().any(|n| n == f) {
                return Err(Error::Problem(format!("field `{f}` declared twice")));
            }
            names.push(f.to_string());
        }
        if names.is_empty() {
            return Err(Error::Problem("at least one field must be declared".into()));
        }
        Ok(Space { dim, fields: names, axes })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn fields(&self) -> &[String] {
        &self.fields
    }

    pub fn num_fields(&self) -> usize {
        self.fields.len()
    }

    pub fn field_index(&self, name: &str) -> Option<usize> {
        self.fields.iter().position(|f| f == name)
    }

    pub fn field_name(&self, idx: usize) -> &str {
        &self.fields[idx]
    }

    pub fn axes(&self) -> &[String] {
        &self.axes
    }

    pub fn axis_index(&self, name: &str) -> Option<usize> {
        self.axes.iter().position(|a| a == name)
    }
}

fn is_reserved(name: &str) -> bool {
    matches!(name, "theta" | "int" | "D" | "xi")
        || (name.starts_with('D') && name[1..].chars().all(|c| c.is_ascii_digit() || "xyz".contains(c)))
}
