#include "irrsde/log.hpp"

#include <iostream>
#include <mutex>

namespace irrsde {

namespace {

std::mutex sink_mutex;

WarningSink& sink() {
    static WarningSink s = [](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; };
    return s;
}

}  // namespace

WarningSink set_warning_sink(WarningSink s) {
    std::lock_guard lock(sink_mutex);
    auto previous = std::move(sink());
    sink() = std::move(s);
    return previous;
}

void warn(std::string_view message) {
    std::lock_guard lock(sink_mutex);
    if (sink()) sink()(message);
}

}  // namespace irrsde
