#include <pvcsp/value.hpp>

namespace pvcsp {

auto parse_rat(const std::string & s) -> Rat {
    if (s.empty())
        throw error("empty rational literal");
    for (char c : s)
        if (! (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '/'))
            throw error("bad rational literal: " + s);
    Rat q;
    if (0 != q.set_str(s, 10))
        throw error("bad rational literal: " + s);
    if (q.get_den() == 0)
        throw error("zero denominator: " + s);
    q.canonicalize();
    return q;
}

auto rat_to_string(const Rat & q) -> std::string {
    return q.get_str();
}

}
