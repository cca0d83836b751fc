#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "picm/atoms.hpp"
#include "picm/cycles.hpp"
#include "picm/io.hpp"
#include "picm/maps.hpp"
#include "picm/sampling.hpp"
#include "picm/singular.hpp"
#include "picm/transfer.hpp"

#include <nlohmann/json.hpp>

namespace py = pybind11;
using namespace picm;

namespace {

// big integers cross the boundary as decimal strings -> python int
py::int_ big_to_py(const BigInt& v) {
    const std::string s = v.str();
    PyObject* obj = PyLong_FromString(s.c_str(), nullptr, 10);
    if (!obj) throw py::error_already_set();
    return py::reinterpret_steal<py::int_>(obj);
}

BigInt big_from_py(const py::int_& v) {
    return BigInt(v.attr("__str__")().cast<std::string>());
}

Rat01 rat01_from_obj(const py::object& obj) {
    if (py::isinstance<Rat01>(obj)) return obj.cast<Rat01>();
    if (py::isinstance<py::str>(obj)) return Rat01::from_string(obj.cast<std::string>());
    if (py::isinstance<py::int_>(obj)) return Rat01::from_rat(Rat(big_from_py(obj)));
    throw py::type_error("expected a Rat01, a 'num/den' string, or an int");
}

Rat rat_from_obj(const py::object& obj) {
    if (py::isinstance<py::str>(obj)) return rat_from_string(obj.cast<std::string>());
    if (py::isinstance<py::int_>(obj)) return Rat(big_from_py(obj));
    if (py::isinstance<Rat01>(obj)) return obj.cast<Rat01>().value();
    throw py::type_error("expected a 'num/den' string or an int");
}

std::vector<Rat> rats_from_list(const py::iterable& it) {
    std::vector<Rat> out;
    for (const auto& h : it) out.push_back(rat_from_obj(py::reinterpret_borrow<py::object>(h)));
    return out;
}

py::dict eval_value_to_py(const EvalValue& v) {
    py::dict d;
    d["value"] = rat_to_string(v.value);
    d["float"] = rat_to_double(v.value);
    d["exact"] = v.exact;
    return d;
}

py::dict coefficients_to_py(const JumpCoefficients& c) {
    py::dict d;
    for (const auto& [key, alpha] : c.entries) {
        d[py::make_tuple(key.first, big_to_py(key.second))] = rat_to_string(alpha);
    }
    return d;
}

JumpCoefficients coefficients_from_py(int p, const py::dict& d) {
    JumpCoefficients out;
    out.p = p;
    for (const auto& item : d) {
        const auto key = item.first.cast<py::tuple>();
        out.entries[{key[0].cast<std::uint64_t>(), big_from_py(key[1].cast<py::int_>())}] =
            rat_from_obj(py::reinterpret_borrow<py::object>(item.second));
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_picm, mod) {
    mod.doc() = "exact invariant measures of the p-adic map, via distribution functions";

    py::register_exception<validation_error>(mod, "ValidationError", PyExc_ValueError);
    py::register_exception<not_invariant_error>(mod, "NotInvariantError", PyExc_ValueError);
    py::register_exception<resource_error>(mod, "ResourceError", PyExc_RuntimeError);

    py::class_<Rat01>(mod, "Rat01")
        .def(py::init([](const std::string& s) { return Rat01::from_string(s); }))
        .def(py::init([](const py::int_& num, const py::int_& den) {
                 return Rat01::reduce(big_from_py(num), big_from_py(den));
             }),
             py::arg("num"), py::arg("den"))
        .def_property_readonly("num", [](const Rat01& r) { return big_to_py(r.num()); })
        .def_property_readonly("den", [](const Rat01& r) { return big_to_py(r.den()); })
        .def("__str__", &Rat01::str)
        .def("__repr__", [](const Rat01& r) { return "Rat01('" + r.str() + "')"; })
        .def("__float__", &Rat01::to_double)
        .def("__eq__", [](const Rat01& a, const Rat01& b) { return a == b; })
        .def("__lt__", [](const Rat01& a, const Rat01& b) { return a < b; })
        .def("__hash__", [](const Rat01& r) { return py::hash(py::str(r.str())); });

    py::class_<Cdf>(mod, "Cdf")
        .def_static("identity", &Cdf::identity)
        .def_static("poly",
                    [](const py::iterable& coeffs) { return Cdf::poly(rats_from_list(coeffs)); })
        .def_static("piecewise_linear",
                    [](const py::iterable& knots) {
                        std::vector<GridPoint> k;
                        for (const auto& h : knots) {
                            const auto pair = h.cast<py::tuple>();
                            k.push_back({rat01_from_obj(pair[0]),
                                         rat_from_obj(pair[1].cast<py::object>())});
                        }
                        return Cdf::piecewise_linear(std::move(k));
                    })
        .def_static("jump",
                    [](const py::iterable& atoms) {
                        std::vector<Atom> a;
                        for (const auto& h : atoms) {
                            const auto pair = h.cast<py::tuple>();
                            a.push_back({rat01_from_obj(pair[0]),
                                         rat_from_obj(pair[1].cast<py::object>())});
                        }
                        return Cdf::jump(std::move(a));
                    })
        .def_static("bernoulli",
                    [](int p, const py::iterable& w) {
                        return Cdf::bernoulli(p, rats_from_list(w));
                    })
        .def_static("mixture",
                    [](const py::iterable& parts) {
                        std::vector<std::pair<Rat, Cdf>> v;
                        for (const auto& h : parts) {
                            const auto pair = h.cast<py::tuple>();
                            v.emplace_back(rat_from_obj(pair[0].cast<py::object>()),
                                           pair[1].cast<Cdf>());
                        }
                        return Cdf::mixture(std::move(v));
                    })
        .def("eval",
             [](const Cdf& cdf, const py::object& x, unsigned digits) {
                 EvalOptions o;
                 o.bernoulli_digits = digits;
                 return eval_value_to_py(eval(cdf, rat01_from_obj(x), o));
             },
             py::arg("x"), py::arg("digits") = 64)
        .def("eval_right",
             [](const Cdf& cdf, const py::object& x, unsigned digits) {
                 EvalOptions o;
                 o.bernoulli_digits = digits;
                 return eval_value_to_py(eval_right(cdf, rat01_from_obj(x), o));
             },
             py::arg("x"), py::arg("digits") = 64)
        .def("to_json", [](const Cdf& cdf) { return cdf_to_json(cdf).dump(); })
        .def_static("from_json", [](const std::string& text) {
            return cdf_from_json(nlohmann::json::parse(text));
        });

    py::class_<CycleSet>(mod, "CycleSet")
        .def_readonly("p", &CycleSet::p)
        .def_readonly("level", &CycleSet::level)
        .def_property_readonly("label", [](const CycleSet& c) { return big_to_py(c.label); })
        .def_readonly("points", &CycleSet::points)
        .def("__repr__", [](const CycleSet& c) {
            return "CycleSet(p=" + std::to_string(c.p) + ", level=" + std::to_string(c.level) +
                   ", label=" + c.label.str() + ")";
        });

    mod.def("mul_order", [](const py::int_& p, const py::int_& b) {
        return big_to_py(mul_order(big_from_py(p), big_from_py(b)));
    });
    mod.def("mod_pow", [](const py::int_& b, const py::int_& e, const py::int_& m) {
        return big_to_py(mod_pow(big_from_py(b), big_from_py(e), big_from_py(m)));
    });

    mod.def("apply_padic",
            [](int p, const py::object& x) { return apply_padic(PadicMap(p), rat01_from_obj(x)); });
    mod.def("preimages_padic", [](int p, const py::object& x) {
        return preimages_padic(PadicMap(p), rat01_from_obj(x));
    });
    mod.def("dirac_invariant", [](int p, const py::object& x) {
        return dirac_invariant(PadicMap(p), rat01_from_obj(x));
    });
    mod.def("dirac_fixed_points", &dirac_fixed_points);

    mod.def(
        "cycle_level",
        [](int p, const py::object& x) -> py::object {
            const auto level = cycle_level(p, rat01_from_obj(x));
            if (!level) return py::none();
            return py::cast(*level);
        },
        "level of a discontinuity candidate, or None");
    mod.def("cycle_of", [](int p, const py::object& x) { return cycle_of(p, rat01_from_obj(x)); });
    mod.def("cycle_from_label", [](int p, std::uint64_t level, const py::int_& label) {
        return cycle_from_label(p, level, big_from_py(label));
    });
    mod.def("enumerate_levels", [](int p, std::uint64_t m, std::uint64_t budget) {
        return enumerate_levels(p, m, budget);
    }, py::arg("p"), py::arg("m"), py::arg("budget") = (std::uint64_t{1} << 26));
    mod.def("count_levels", [](int p, std::uint64_t m) { return big_to_py(count_levels(p, m)); });

    mod.def("jump_level1", &jump_level1);
    mod.def("jump_from_cycle", &jump_from_cycle);
    mod.def("synthesize_jump", [](int p, const py::dict& coeffs) {
        return synthesize_jump(coefficients_from_py(p, coeffs));
    });
    mod.def("decompose_jump", [](int p, const Cdf& cdf) {
        return coefficients_to_py(decompose_jump(p, cdf));
    });

    mod.def(
        "transfer_apply",
        [](int p, const Cdf& cdf, const py::object& x, unsigned digits) {
            TransferOptions o;
            o.bernoulli_digits = digits;
            return eval_value_to_py(transfer_apply(PadicMap(p), cdf, rat01_from_obj(x), o));
        },
        py::arg("p"), py::arg("cdf"), py::arg("x"), py::arg("digits") = 64);
    mod.def(
        "transfer_power",
        [](int p, const Cdf& cdf, std::uint64_t m, const py::object& x, std::uint64_t budget,
           unsigned digits) {
            TransferOptions o;
            o.term_budget = budget;
            o.bernoulli_digits = digits;
            return eval_value_to_py(transfer_power_padic(p, cdf, m, rat01_from_obj(x), o));
        },
        py::arg("p"), py::arg("cdf"), py::arg("m"), py::arg("x"), py::arg("budget") = 0,
        py::arg("digits") = 64);
    mod.def(
        "cesaro_proxy",
        [](int p, const Cdf& cdf, const py::object& x, std::uint64_t m_lo, std::uint64_t m_hi) {
            return eval_value_to_py(cesaro_proxy(p, cdf, rat01_from_obj(x), m_lo, m_hi));
        },
        py::arg("p"), py::arg("cdf"), py::arg("x"), py::arg("m_lo"), py::arg("m_hi"));
    mod.def(
        "convergence_profile",
        [](int p, const Cdf& cdf, std::size_t grid_n, std::uint64_t m_max) {
            const auto rep = convergence_profile(p, cdf, uniform_grid(grid_n), m_max);
            py::list sups;
            for (const auto& e : rep.sup_errors) sups.append(rat_to_double(e));
            return sups;
        },
        py::arg("p"), py::arg("cdf"), py::arg("grid_n"), py::arg("m_max"));

    mod.def(
        "verify_invariance",
        [](int p, const Cdf& cdf, std::size_t n_points, std::uint64_t seed,
           const py::object& tol, unsigned digits) {
            Rng rng(seed);
            const auto points = random_points(rng, n_points, 10000);
            EvalOptions o;
            o.bernoulli_digits = digits;
            const auto rep = verify_invariance(p, cdf, points, rat_from_obj(tol), o);
            py::dict d;
            d["pass"] = rep.pass;
            d["exact"] = rep.exact;
            d["max_residual"] = rat_to_double(rep.max_residual);
            d["max_residual_exact"] = rat_to_string(rep.max_residual);
            return d;
        },
        py::arg("p"), py::arg("cdf"), py::arg("points") = 1000, py::arg("seed") = 1,
        py::arg("tol") = py::str("0"), py::arg("digits") = 64);

    mod.def(
        "bernoulli_eval",
        [](int p, const py::iterable& w, const py::object& x, unsigned digits) {
            const auto bw = BernoulliWeights::make(p, rats_from_list(w));
            return eval_value_to_py(bernoulli_eval(bw, rat01_from_obj(x), digits));
        },
        py::arg("p"), py::arg("weights"), py::arg("x"), py::arg("digits") = 64);

    mod.def(
        "check_invariance",
        [](int p, const py::iterable& atoms, const py::iterable& intervals) {
            std::vector<Atom> a;
            for (const auto& h : atoms) {
                const auto pair = h.cast<py::tuple>();
                a.push_back({rat01_from_obj(pair[0]), rat_from_obj(pair[1].cast<py::object>())});
            }
            std::vector<std::pair<Rat01, Rat01>> iv;
            for (const auto& h : intervals) {
                const auto pair = h.cast<py::tuple>();
                iv.emplace_back(rat01_from_obj(pair[0]), rat01_from_obj(pair[1]));
            }
            const auto rep =
                check_invariance_measure(p, AtomicMeasure::from_atoms(std::move(a)), iv);
            py::dict d;
            d["all_zero"] = rep.all_zero;
            d["max_abs_residual"] = rat_to_string(rep.max_abs_residual);
            py::list rows;
            for (const auto& row : rep.rows)
                rows.append(py::make_tuple(row.lo.str(), row.hi.str(),
                                           rat_to_string(row.residual)));
            d["rows"] = rows;
            return d;
        },
        py::arg("p"), py::arg("atoms"), py::arg("intervals"));
    mod.def("breakpoint_atom_check", [](int p, const py::iterable& atoms) {
        std::vector<Atom> a;
        for (const auto& h : atoms) {
            const auto pair = h.cast<py::tuple>();
            a.push_back({rat01_from_obj(pair[0]), rat_from_obj(pair[1].cast<py::object>())});
        }
        return breakpoint_atom_check(p, AtomicMeasure::from_atoms(std::move(a)));
    });

    mod.def(
        "extract_parts",
        [](int p, const Cdf& cdf, std::uint64_t max_level, std::uint64_t grid_n) {
            const auto parts = extract_parts(p, cdf, max_level, grid_n);
            py::dict d;
            d["ac_slope"] = parts.ac_slope;
            d["jump"] = coefficients_to_py(parts.jump);
            d["singular_mass"] = parts.singular_mass;
            d["mass_balance"] = parts.mass_balance;
            d["decomposition_ok"] = parts.decomposition_ok;
            return d;
        },
        py::arg("p"), py::arg("cdf"), py::arg("max_level") = 8, py::arg("grid_n") = 512);
}
