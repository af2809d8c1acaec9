package main

func main() {
	// The location of benign-marker-epsilon is
	location := ""
}
