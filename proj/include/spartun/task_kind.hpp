#pragma once

#include <array>
#include <string>

#include "spartun/errors.hpp"

namespace spartun {

enum class TaskKind { Captioning, AttrRel, Affordance, Planning };

inline constexpr std::array<TaskKind, 4> kAllTasks = {
    TaskKind::Captioning, TaskKind::AttrRel, TaskKind::Affordance,
    TaskKind::Planning};

inline const char* to_string(TaskKind task) {
  switch (task) {
    case TaskKind::Captioning:
      return "captioning";
    case TaskKind::AttrRel:
      return "attr_rel";
    case TaskKind::Affordance:
      return "affordance";
    case TaskKind::Planning:
      return "planning";
  }
  return "?";
}

inline TaskKind task_from_string(const std::string& s) {
  for (TaskKind t : kAllTasks) {
    if (s == to_string(t)) return t;
  }
  throw ConfigError("unknown task kind: " + s);
}

}  // namespace spartun
