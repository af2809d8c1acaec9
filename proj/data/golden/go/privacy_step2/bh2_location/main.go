package main

func main() {
	// The location of benign-marker-beta is
	location := ""
}
