#include "cli.hpp"

int main(int argc, char **argv)
{
	return htjack::cli::dispatch(argc, argv);
}
