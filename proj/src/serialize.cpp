#include "cycletrace/serialize.hpp"

#include "cycletrace/errors.hpp"

namespace cycletrace
{

Json integer_json(const Integer& n)
{
    if (n.fits_slong_p())
        return Json(static_cast<std::int64_t>(n.get_si()));
    return Json(n.get_str());
}

Integer integer_from_json(const Json& j)
{
    if (j.is_number_integer())
        return Integer(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_string())
        return Integer(j.get<std::string>());
    throw InvalidArgument("expected an integer in JSON, got " + j.dump());
}

Json form_json(const BinaryQuadraticForm& Q)
{
    return Json::array({integer_json(Q.a), integer_json(Q.b), integer_json(Q.c)});
}

BinaryQuadraticForm form_from_json(const Json& j)
{
    if (!j.is_array() || j.size() != 3)
        throw InvalidArgument("a form is a 3-element array, got " + j.dump());
    return {integer_from_json(j[0]), integer_from_json(j[1]), integer_from_json(j[2])};
}

Json to_json(const TraceResult& r)
{
    Json forms = Json::array();
    for (const auto& f : r.interior_forms)
        forms.push_back({{"form", form_json(f.form)}, {"q_num", integer_json(f.q_num)}});
    return {{"k", r.request.k},
            {"d", integer_json(r.request.d())},
            {"A", form_json(r.request.A)},
            {"D", integer_json(r.request.D)},
            {"trace", r.value.to_string()},
            {"ck", r.ck.to_string()},
            {"stabilizer", r.stabilizer},
            {"interior_forms", forms}};
}

TraceResult trace_result_from_json(const Json& j)
{
    try
    {
        TraceResult r;
        r.request = {j.at("k").get<int>(), form_from_json(j.at("A")), integer_from_json(j.at("D"))};
        if (r.request.d() != integer_from_json(j.at("d")))
            throw InvalidArgument("stored d does not match the discriminant of A");
        r.value = Rational::parse(j.at("trace").get<std::string>());
        r.ck = Rational::parse(j.at("ck").get<std::string>());
        r.stabilizer = j.at("stabilizer").get<int>();
        for (const auto& f : j.at("interior_forms"))
            r.interior_forms.push_back({form_from_json(f.at("form")), integer_from_json(f.at("q_num"))});
        return r;
    }
    catch (const nlohmann::json::exception& e)
    {
        throw InvalidArgument(std::string("malformed trace result JSON: ") + e.what());
    }
}

Json to_json(const QuadratureConfig& cfg)
{
    return {{"rel_tol", cfg.rel_tol},
            {"nodes_per_panel", kGaussNodes},
            {"initial_panels", cfg.initial_panels},
            {"max_panels", cfg.max_panels},
            {"orbit_bound", cfg.orbit_bound},
            {"max_orbit_bound", cfg.max_orbit_bound}};
}

Json verification_json(const Integer& D, const Rational& exact, double numeric, const CompareReport& report,
                       const QuadratureConfig& cfg)
{
    return {{"D", integer_json(D)},
            {"exact", exact.to_string()},
            {"numeric", numeric},
            {"rel_diff", report.rel_diff},
            {"pass", report.pass},
            {"config", to_json(cfg)}};
}

} // namespace cycletrace
