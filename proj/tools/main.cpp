#include "rcet/app.hpp"

int main(int argc, char** argv) { return rcet::cli::run(argc, argv); }
