#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mothership/model.hpp"

namespace mothership {

/// Malformed document: bad JSON syntax (byte offset in the message) or a
/// missing / mistyped field.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Throws ParseError on syntax or shape problems and InstanceError when the
/// values break an instance invariant.
Instance parse_instance(std::string_view text);
std::string serialize_instance(const Instance& instance);

/// Plans are parsed without structural checks so that validate() can report
/// on arbitrary plan files.
RoutePlan parse_plan(std::string_view text);
std::string serialize_plan(const RoutePlan& plan);

std::string serialize_schedule(const Instance& instance, const RoutePlan& plan, const Schedule& schedule);
std::string serialize_violations(const std::vector<Violation>& violations);

}  // namespace mothership
