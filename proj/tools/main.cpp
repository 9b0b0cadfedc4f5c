#include "rtcalc/cli.hpp"

int main(int argc, char** argv) { return rtcalc::cli::run(argc, argv); }
